//! Subgroup geometry inside the Fermat sextic's automorphism group.
//!
//! `Aut(F6)` for `F6 = X^6 + Y^6 + Z^6` has order 216: diagonal sixth roots
//! of unity extended by the coordinate permutations.  Its order-6 symmetric
//! subgroups fall into exactly two conjugacy classes, represented by
//!
//! ```text
//! S31 = < diag(1, E(3), E(3)^2), [X : Z : Y] >
//! S32 = < [Y : Z : X],           [X : Z : Y] >
//! ```
//!
//! and it also holds two tetrahedral subgroups that are conjugate in the
//! full plane group but not inside `Aut(F6)`:
//!
//! ```text
//! A41 = < [Y : Z : X],          diag(1, 1, -1), diag(1, -1, 1) >
//! A42 = < [E(6)^-1 Y : Z : X],  diag(1, 1, -1), diag(1, -1, 1) >
//! ```
//!
//! The rescaling `diag(E(18)^-1, E(18), 1)` carries `A42` onto `A41`, so
//! the distinction between them is a fact about the embedding in `Aut(F6)`,
//! not about the abstract groups.  Everything here is checked by brute
//! force over the 216 elements.

use std::collections::HashSet;

use crate::expr::ParamMap;
use crate::pgl::{parse_matrix, MatrixGroup, ProjMatrix};
use crate::poly::{parse_poly, HomogPoly};

use super::StrataError;

fn fixed_matrix(src: &str) -> ProjMatrix {
    parse_matrix(src, &ParamMap::new()).expect("fixed matrix parses")
}

/// The Fermat sextic `X^6 + Y^6 + Z^6`.
pub fn fermat_sextic() -> HomogPoly {
    parse_poly("X^6 + Y^6 + Z^6", &ParamMap::new()).expect("fixed curve parses")
}

/// The order-216 automorphism group of the Fermat sextic.
pub fn fermat_group() -> Result<MatrixGroup, StrataError> {
    let gens = [
        fixed_matrix("diag(1, E(6), 1)"),
        fixed_matrix("diag(1, 1, E(6))"),
        fixed_matrix("[Y : Z : X]"),
        fixed_matrix("[X : Z : Y]"),
    ];
    Ok(MatrixGroup::closure(&gens)?)
}

/// The two order-6 symmetric subgroups, diagonal-rotation first.
pub fn s3_pair() -> Result<(MatrixGroup, MatrixGroup), StrataError> {
    let swap = fixed_matrix("[X : Z : Y]");
    let first = MatrixGroup::closure(&[fixed_matrix("diag(1, E(3), E(3)^2)"), swap.clone()])?;
    let second = MatrixGroup::closure(&[fixed_matrix("[Y : Z : X]"), swap])?;
    Ok((first, second))
}

/// The two tetrahedral subgroups, plain rotation first.
pub fn a4_pair() -> Result<(MatrixGroup, MatrixGroup), StrataError> {
    let d1 = fixed_matrix("diag(1, 1, -1)");
    let d2 = fixed_matrix("diag(1, -1, 1)");
    let first = MatrixGroup::closure(&[fixed_matrix("[Y : Z : X]"), d1.clone(), d2.clone()])?;
    let second = MatrixGroup::closure(&[fixed_matrix("[E(6)^-1*Y : Z : X]"), d1, d2])?;
    Ok((first, second))
}

/// The plane rescaling that conjugates `A42` onto `A41`.
pub fn a4_rescaling() -> ProjMatrix {
    fixed_matrix("diag(E(18)^-1, E(18), 1)")
}

fn subgroup_key(g: &MatrixGroup) -> Vec<String> {
    let mut key: Vec<String> = g.elements().iter().map(ProjMatrix::to_string).collect();
    key.sort();
    key
}

/// Counts the conjugacy classes of nonabelian order-6 subgroups of
/// `Aut(F6)` by enumerating generator pairs and orbiting under all 216
/// conjugations.
pub fn s3_class_count() -> Result<usize, StrataError> {
    let host = fermat_group()?;
    let mut rotations = Vec::new();
    let mut involutions = Vec::new();
    for m in host.elements() {
        match m.projective_order()? {
            2 => involutions.push(m.clone()),
            3 => rotations.push(m.clone()),
            _ => {}
        }
    }

    let mut subgroups: Vec<MatrixGroup> = Vec::new();
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    for r in &rotations {
        for i in &involutions {
            let Ok(g) = MatrixGroup::closure_capped(&[r.clone(), i.clone()], 7) else {
                continue;
            };
            if g.order() != 6 || g.fingerprint()?.abelian {
                continue;
            }
            if seen.insert(subgroup_key(&g)) {
                subgroups.push(g);
            }
        }
    }

    let mut classified: HashSet<Vec<String>> = HashSet::new();
    let mut classes = 0;
    for g in &subgroups {
        if classified.contains(&subgroup_key(g)) {
            continue;
        }
        classes += 1;
        for phi in host.elements() {
            classified.insert(subgroup_key(&g.conjugate(phi)));
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_group_has_order_216() {
        let f = fermat_sextic();
        let host = fermat_group().unwrap();
        assert_eq!(host.order(), 216);
        for g in host.generators() {
            assert!(g.automorphy_factor(&f).is_some());
        }
    }

    #[test]
    fn symmetric_pair_not_conjugate_inside() {
        let host = fermat_group().unwrap();
        let (s31, s32) = s3_pair().unwrap();
        assert_eq!(s31.order(), 6);
        assert_eq!(s32.order(), 6);
        assert!(host.conjugating_element(&s31, &s32).unwrap().is_none());
    }

    #[test]
    fn tetrahedral_pair_conjugate_only_by_rescaling() {
        let host = fermat_group().unwrap();
        let (a41, a42) = a4_pair().unwrap();
        assert_eq!(a41.order(), 12);
        assert_eq!(a42.order(), 12);
        assert!(host.conjugating_element(&a41, &a42).unwrap().is_none());

        let phi = a4_rescaling();
        assert!(!host.contains(&phi));
        assert!(a42.conjugate(&phi).same_elements(&a41));
        // Both subgroups fix the curve, so the distinction is embedding-only.
        let f = fermat_sextic();
        for g in a41.generators().iter().chain(a42.generators()) {
            assert!(g.automorphy_factor(&f).is_some());
        }
    }

    #[test]
    fn exactly_two_symmetric_classes() {
        assert_eq!(s3_class_count().unwrap(), 2);
    }
}
