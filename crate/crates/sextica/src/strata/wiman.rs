//! The exceptional stratum of order 360.
//!
//! Exactly one smooth plane sextic has an automorphism group of order 360,
//! isomorphic to the alternating group on six letters.  Its model here is
//!
//! ```text
//! W6 = 27 X^6 + 9 X Z^5 + 9 X Y^5 - 135 X^4 Y Z - 45 X^2 Y^2 Z^2 + 10 Y^3 Z^3
//! ```
//!
//! and the group is `R^-1 <T1, T2, T3, T4> R` for four short matrices and a
//! frame change `R` built from `b = (1 + RT(5))/2`, `c = E(3)`,
//! `a = (1 + 2c + 2b + bc)/6`, and a square root `t` of `b - 3`.  That root
//! is a cyclotomic number: `(E(5)^2 - E(5)^3)^2 = E(5) + E(5)^4 - 2 = b - 3`,
//! so everything lives in `Q(zeta_15)`.
//!
//! The sign of `t` is a genuine choice, [`WimanBranch`], and both choices
//! produce an order-360 group preserving `W6`: the Galois map
//! `E(5) -> E(5)^4` fixes `b`, `c`, and the coefficients of `W6` while
//! negating `t`, so it carries either generating set to the other.  No test
//! can therefore single out one branch as "the" valid one.

use crate::cyclo::FieldElem;
use crate::expr::{parse_scalar, ParamMap};
use crate::pgl::{parse_matrix, MatrixGroup, ProjMatrix};
use crate::poly::{parse_poly, HomogPoly};

use super::StrataError;

/// The two square roots of `b - 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WimanBranch {
    /// `t = E(5)^2 - E(5)^3`.
    Plus,
    /// `t = E(5)^3 - E(5)^2`.
    Minus,
}

impl WimanBranch {
    /// The chosen square root of `b - 3`.
    pub fn radical(self) -> FieldElem {
        let t = parse_scalar("E(5)^2 - E(5)^3", &ParamMap::new())
            .expect("fixed scalar parses");
        match self {
            WimanBranch::Plus => t,
            WimanBranch::Minus => -&t,
        }
    }
}

/// The sextic itself.
pub fn wiman_curve() -> HomogPoly {
    parse_poly(
        "27*X^6 + 9*X*Z^5 + 9*X*Y^5 - 135*X^4*Y*Z - 45*X^2*Y^2*Z^2 + 10*Y^3*Z^3",
        &ParamMap::new(),
    )
    .expect("fixed curve parses")
}

fn constants(branch: WimanBranch) -> Result<ParamMap, StrataError> {
    let mut params = ParamMap::new();
    let b = parse_scalar("(1 + RT(5))/2", &params).map_err(crate::poly::PolyError::from)?;
    params.insert("b".into(), b);
    let c = FieldElem::root_of_unity(3, 1);
    params.insert("c".into(), c);
    let a = parse_scalar("(1 + 2*c + 2*b + b*c)/6", &params)
        .map_err(crate::poly::PolyError::from)?;
    params.insert("a".into(), a);
    params.insert("t".into(), branch.radical());
    Ok(params)
}

/// The frame change `R` for the chosen branch.
pub fn wiman_frame(branch: WimanBranch) -> Result<ProjMatrix, StrataError> {
    let params = constants(branch)?;
    let r = parse_matrix(
        "[[a*(1-b), a*(1-b), (1 + 2*c + b*c)/2], \
          [a*t, -a*t, 0], \
          [a, a, -(1 + c + b)/2 + b*c]]",
        &params,
    )?;
    Ok(r)
}

/// The four conjugated generators `R^-1 Ti R`.
pub fn wiman_generators(branch: WimanBranch) -> Result<Vec<ProjMatrix>, StrataError> {
    let params = constants(branch)?;
    let r = wiman_frame(branch)?;
    let seeds = [
        "diag(1, -1, 1)",
        "[Z : X : Y]",
        "[X : E(3)^-1*Z : -E(3)*Y]",
        "[[1, 1/b, -b], [1/b, b, 1], [b, -1, 1/b]]",
    ];
    let mut out = Vec::new();
    for src in seeds {
        out.push(parse_matrix(src, &params)?.conjugate_by(&r));
    }
    Ok(out)
}

/// The full group of `W6`, one branch's copy.
pub fn wiman_group(branch: WimanBranch) -> Result<MatrixGroup, StrataError> {
    Ok(MatrixGroup::closure(&wiman_generators(branch)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_squares_to_b_minus_3() {
        let params = constants(WimanBranch::Plus).unwrap();
        let b = params["b"].clone();
        for branch in [WimanBranch::Plus, WimanBranch::Minus] {
            let t = branch.radical();
            let target = &b - &FieldElem::from(3);
            assert_eq!(&t * &t, target);
        }
        assert_eq!(
            WimanBranch::Plus.radical(),
            -&WimanBranch::Minus.radical()
        );
    }

    #[test]
    fn generators_preserve_the_curve() {
        let f = wiman_curve();
        for branch in [WimanBranch::Plus, WimanBranch::Minus] {
            for (n, g) in wiman_generators(branch).unwrap().iter().enumerate() {
                assert!(
                    g.automorphy_factor(&f).is_some(),
                    "{branch:?} generator {n} moves the curve"
                );
            }
        }
    }

    #[test]
    fn group_has_order_360_with_simple_shape() {
        let g = wiman_group(WimanBranch::Plus).unwrap();
        assert_eq!(g.order(), 360);
        let fp = g.fingerprint().unwrap();
        assert_eq!(fp.center_order, 1);
        assert_eq!(fp.derived_order, 360);
        assert!(!fp.abelian);
        // Alternating-group element orders only.
        assert!(fp.element_orders.keys().all(|&k| k <= 5));
    }
}
