//! Deciding the full automorphism group from a normalised equation.
//!
//! The entry point is [`classify`]. It expects a smooth plane sextic written
//! so that a diagonal automorphism `diag(1, E(m)^a, E(m)^b)` of maximal
//! cyclic order is visible, i.e. the support lies in one weight class of the
//! chosen [`TypeDescriptor`]. Under that assumption the full group is pinned
//! down by coefficient conditions. Generic members of each family are decided
//! outright; members that jump to a larger group are either detected from
//! closed-form conditions, reported as undecided branches, or confirmed
//! through a caller-supplied [`Witness`].
//!
//! Two safety nets run before any family-specific logic. First, the exponent
//! lattice of the support is inspected: if a diagonal substitution of order
//! larger than `m` fixes the curve, the declared type cannot be maximal and
//! classification stops with a `ConstraintViolation`. Second, a curve whose
//! support consists of the three sixth-power corners is a rescaling of the
//! Fermat sextic and is labelled as such immediately.

use num::integer::gcd;

use crate::cyclo::field::FieldElem;
use crate::expr::{parse_scalar, ParamMap};
use crate::pgl::{parse_matrix, GroupLabel, MatrixGroup, ProjMatrix};
use crate::poly::{mono, HomogPoly, Monomial};

use super::catalogue::Catalogue;
use super::types::TypeDescriptor;
use super::StrataError;

/// Optional extra data that lets [`classify`] confirm a jump to a larger
/// group instead of reporting it as an undecided branch.
///
/// Three kinds of witness are understood:
///
/// * named parameter values in `values`, interpreted by the family handler
///   (for example `lambda`/`mu` for the order-twelve branch of the
///   order-three families, or `gamma` for the pencil through the order-360
///   curve);
/// * a `conjugator` together with a `target` label, claiming that the
///   conjugated generators of the target stratum fix the curve;
/// * nothing at all, via [`Witness::none`], in which case only closed-form
///   conditions are applied.
#[derive(Clone, Debug, Default)]
pub struct Witness {
    pub values: ParamMap,
    pub conjugator: Option<ProjMatrix>,
    pub target: Option<GroupLabel>,
}

impl Witness {
    /// A witness carrying no information.
    pub fn none() -> Self {
        Self::default()
    }

    /// A witness consisting of named parameter values.
    pub fn with_values(values: ParamMap) -> Self {
        Witness {
            values,
            conjugator: None,
            target: None,
        }
    }
}

/// How much trust to place in the returned label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassificationMode {
    /// The label is the full automorphism group, provided the declared type
    /// really has maximal cyclic order for this curve.
    Exact,
    /// The label is correct for generic parameter values, but special values
    /// listed in `undecided` could not be ruled out without a witness.
    Generic,
}

/// Outcome of [`classify`].
#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub label: GroupLabel,
    pub mode: ClassificationMode,
    /// Larger groups the curve might have when `mode` is `Generic`.
    pub undecided: Vec<GroupLabel>,
    /// Short human-readable justification.
    pub note: String,
}

fn exact(label: GroupLabel, note: impl Into<String>) -> Result<ClassificationResult, StrataError> {
    Ok(ClassificationResult {
        label,
        mode: ClassificationMode::Exact,
        undecided: Vec::new(),
        note: note.into(),
    })
}

fn generic(
    label: GroupLabel,
    undecided: Vec<GroupLabel>,
    note: impl Into<String>,
) -> Result<ClassificationResult, StrataError> {
    Ok(ClassificationResult {
        label,
        mode: ClassificationMode::Generic,
        undecided,
        note: note.into(),
    })
}

fn cv(msg: impl Into<String>) -> StrataError {
    StrataError::ConstraintViolation(msg.into())
}

fn rejected(msg: impl Into<String>) -> StrataError {
    StrataError::WitnessRejected(msg.into())
}

fn int(n: i64) -> FieldElem {
    FieldElem::from(n)
}

fn rat(n: i64, d: i64) -> FieldElem {
    int(n).try_div(&int(d)).expect("nonzero denominator")
}

fn zeta(n: u64, k: i64) -> FieldElem {
    FieldElem::root_of_unity(n, k)
}

fn neg(x: &FieldElem) -> FieldElem {
    int(0).try_sub(x).expect("negation never mixes radicals")
}

/// Name the automorphism group of `f`, assuming `diag(1, E(m)^a, E(m)^b)`
/// generates a cyclic subgroup of maximal order.
///
/// The support of `f` must lie in the weight class of `ty`, possibly after
/// permuting the variables; the handful of monomials that every family
/// member shares must have coefficient one. Violations are reported as
/// `NotNormalForm`. A `ConstraintViolation` means the curve is provably not
/// a member of the declared stratum (most often because a substitution of
/// order larger than `m` fixes it).
pub fn classify(
    f: &HomogPoly,
    ty: &TypeDescriptor,
    witness: &Witness,
    cat: &Catalogue,
) -> Result<ClassificationResult, StrataError> {
    if f.is_zero() || f.degree() != 6 {
        return Err(StrataError::NotNormalForm(
            "expected a nonzero form of degree six".into(),
        ));
    }
    let fitted = fit_frame(f, ty)?;
    let fitted = if (ty.m, ty.a, ty.b) == (5, 0, 1) {
        absorb_quintic_line(&fitted)?
    } else {
        fitted
    };
    check_unit_core(&fitted, ty)?;
    let f = &fitted;

    if let (Some(conj), Some(target)) = (&witness.conjugator, &witness.target) {
        return conjugated_target(f, conj, target, cat);
    }

    diagonal_order_bound(f, ty.m)?;

    if is_corners_only(f) {
        return exact(
            GroupLabel::new(216, 92),
            "every monomial is a sixth power of a variable, so the curve is \
             a rescaling of the Fermat sextic",
        );
    }

    match (ty.m, ty.a, ty.b) {
        (30, 5, 6) => exact(GroupLabel::new(30, 4), "the family is a single curve"),
        (25, 1, 20) => exact(GroupLabel::new(25, 1), "the family is a single curve"),
        (24, 1, 19) => exact(GroupLabel::new(144, 122), "the family is a single curve"),
        (21, 1, 17) => exact(GroupLabel::new(63, 3), "the family is a single curve"),
        (15, 5, 6) => t15(f),
        (12, 1, 7) => t12(f),
        (10, 5, 6) => exact(
            GroupLabel::new(10, 2),
            "no special member of this family exists within the declared order",
        ),
        (8, 1, 3) => exact(
            GroupLabel::new(16, 8),
            "no special member of this family exists within the declared order",
        ),
        (7, 1, 3) => t7(f),
        (6, 1, 2) => t6_12(f),
        (6, 1, 3) => t6_13(f),
        (6, 0, 1) => t6_01(f),
        (5, 1, 2) => exact(
            GroupLabel::tagged(5, 1, "free"),
            "this family sits at the bottom of its branch and has no special members",
        ),
        (5, 1, 4) => t5_14(f, ty, witness, cat),
        (5, 0, 1) => t5_01(f),
        (4, 1, 3) => t4_13(f, witness, cat),
        (3, 1, 2) => t3_12(f, ty, witness, cat),
        (3, 0, 1) => t3_01(f),
        (2, 0, 1) => t2_01(f),
        _ => Err(StrataError::UnknownType(ty.m, ty.a, ty.b)),
    }
}

/// Permute the variables until the support lands in the declared weight
/// class. The identity is tried first, then the five nontrivial
/// permutations.
fn fit_frame(f: &HomogPoly, ty: &TypeDescriptor) -> Result<HomogPoly, StrataError> {
    let fits = |g: &HomogPoly| g.support().iter().all(|m| ty.monomials.contains(m));
    if fits(f) {
        return Ok(f.clone());
    }
    let empty = ParamMap::new();
    for src in [
        "[X : Z : Y]",
        "[Y : X : Z]",
        "[Y : Z : X]",
        "[Z : X : Y]",
        "[Z : Y : X]",
    ] {
        let perm = parse_matrix(src, &empty)?;
        let g = perm.apply(f);
        if fits(&g) {
            return Ok(g);
        }
    }
    let bad = f
        .support()
        .into_iter()
        .find(|m| !ty.monomials.contains(m))
        .expect("some monomial fails, otherwise the identity would fit");
    Err(StrataError::NotNormalForm(format!(
        "monomial {bad} does not lie in the weight class of type {} in any variable order",
        ty.name()
    )))
}

/// For the type with `(a, b) = (0, 1)` and `m = 5` the fifth power of `Z`
/// multiplies an arbitrary linear form in `X` and `Y`; normalise it to
/// `Y*Z^5` by a shear so that the remaining handlers see a clean slot.
fn absorb_quintic_line(f: &HomogPoly) -> Result<HomogPoly, StrataError> {
    let empty = ParamMap::new();
    let mut g = f.clone();
    if g.coeff(0, 1, 5).is_zero() && !g.coeff(1, 0, 5).is_zero() {
        g = parse_matrix("[Y : X : Z]", &empty)?.apply(&g);
    }
    let c015 = g.coeff(0, 1, 5);
    if c015.is_zero() {
        return Err(cv(
            "no monomial divisible by Z^5 is present, so the curve is singular \
             at the vertex (0 : 0 : 1)",
        ));
    }
    let c105 = g.coeff(1, 0, 5);
    if !c105.is_zero() {
        let beta = c105.try_div(&c015)?;
        let shear = ProjMatrix::new([
            [int(1), int(0), int(0)],
            [neg(&beta), int(1), int(0)],
            [int(0), int(0), int(1)],
        ])?;
        g = shear.apply(&g);
    }
    Ok(g)
}

/// The monomials every member of a family shares, which the normal form
/// scales to coefficient one.
fn unit_core(ty: &TypeDescriptor) -> Vec<Monomial> {
    let corner = vec![mono(6, 0, 0), mono(0, 6, 0), mono(0, 0, 6)];
    match (ty.m, ty.a, ty.b) {
        (30, 5, 6) | (15, 5, 6) | (10, 5, 6) => {
            vec![mono(6, 0, 0), mono(0, 6, 0), mono(1, 0, 5)]
        }
        (25, 1, 20) => vec![mono(6, 0, 0), mono(0, 5, 1), mono(1, 0, 5)],
        (24, 1, 19) | (12, 1, 7) | (8, 1, 3) | (4, 1, 3) => {
            vec![mono(6, 0, 0), mono(0, 5, 1), mono(0, 1, 5)]
        }
        (21, 1, 17) | (7, 1, 3) => vec![mono(5, 1, 0), mono(0, 5, 1), mono(1, 0, 5)],
        (3, 1, 2) if ty.class == 1 => vec![mono(5, 1, 0), mono(0, 5, 1), mono(1, 0, 5)],
        (6, 1, 2) | (6, 1, 3) | (3, 1, 2) => corner,
        (6, 0, 1) | (3, 0, 1) | (2, 0, 1) => vec![mono(0, 0, 6)],
        (5, 1, 2) | (5, 1, 4) => vec![mono(6, 0, 0), mono(1, 0, 5), mono(1, 5, 0)],
        (5, 0, 1) => vec![mono(0, 1, 5)],
        _ => Vec::new(),
    }
}

fn check_unit_core(f: &HomogPoly, ty: &TypeDescriptor) -> Result<(), StrataError> {
    for m in unit_core(ty) {
        if !f.coeff(m.i, m.j, m.k).is_one() {
            return Err(StrataError::NotNormalForm(format!(
                "the coefficient of {m} must be 1 in the type {} normal form",
                ty.name()
            )));
        }
    }
    Ok(())
}

/// Reject the declared type when the support already admits a diagonal
/// substitution of order larger than `m`.
///
/// The differences of exponent vectors span a sublattice of Z^2; the largest
/// cyclic order among diagonal substitutions fixing the curve is the second
/// elementary divisor of that sublattice (the first divides out the
/// simultaneous root-of-unity rescalings).
fn diagonal_order_bound(f: &HomogPoly, m: u64) -> Result<(), StrataError> {
    let supp = f.support();
    let base = supp[0];
    let diffs: Vec<(i64, i64)> = supp[1..]
        .iter()
        .map(|mn| {
            (
                mn.j as i64 - base.j as i64,
                mn.k as i64 - base.k as i64,
            )
        })
        .collect();
    let mut g1: i64 = 0;
    for (dj, dk) in &diffs {
        g1 = gcd(g1, dj.abs());
        g1 = gcd(g1, dk.abs());
    }
    let mut g2: i64 = 0;
    for p in 0..diffs.len() {
        for q in p + 1..diffs.len() {
            let det = diffs[p].0 * diffs[q].1 - diffs[p].1 * diffs[q].0;
            g2 = gcd(g2, det.abs());
        }
    }
    if g2 == 0 {
        return Err(cv(
            "the support is collinear in the exponent lattice, so a torus of \
             diagonal substitutions fixes the curve",
        ));
    }
    let exponent = (g2 / g1) as u64;
    if exponent > m {
        return Err(cv(format!(
            "a diagonal substitution of order {exponent} fixes the curve, \
             so {m} is not the maximal cyclic order"
        )));
    }
    Ok(())
}

fn is_corners_only(f: &HomogPoly) -> bool {
    f.support()
        .iter()
        .all(|m| matches!((m.i, m.j, m.k), (6, 0, 0) | (0, 6, 0) | (0, 0, 6)))
}

/// Confirm a claimed label by conjugating the stored generators of every
/// stratum with that label and checking that they fix the curve. Both
/// orientations of the conjugator are tried.
fn conjugated_target(
    f: &HomogPoly,
    conj: &ProjMatrix,
    target: &GroupLabel,
    cat: &Catalogue,
) -> Result<ClassificationResult, StrataError> {
    let rows = cat.rows_with_label(target);
    if rows.is_empty() {
        return Err(rejected(format!("no stratum carries the label {target}")));
    }
    let inv = conj.inverse();
    for phi in [conj, &inv] {
        'rows: for row in &rows {
            let Ok(gens) = cat.generators(row) else {
                continue;
            };
            let mut conjugated = Vec::with_capacity(gens.len());
            for g in &gens {
                let h = g.conjugate_by(phi);
                if h.automorphy_factor(f).is_none() {
                    continue 'rows;
                }
                conjugated.push(h);
            }
            let grp = MatrixGroup::closure(&conjugated)?;
            if grp.order() != target.order {
                continue;
            }
            let fp = grp.fingerprint()?;
            if matches!(cat.identify(&fp), Ok(l) if l == *target) {
                return exact(
                    target.clone(),
                    "the conjugated generators of the claimed stratum fix the curve",
                );
            }
        }
    }
    Err(rejected(
        "the conjugator does not carry the generators of the claimed label \
         onto automorphisms of the curve",
    ))
}

fn t15(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let c330 = f.coeff(3, 3, 0);
    if c330 == int(2) || c330 == int(-2) {
        return Err(cv(
            "the binary part is a perfect square, so the curve is singular \
             along Z = 0",
        ));
    }
    exact(GroupLabel::new(15, 1), "generic member of the family")
}

fn t12(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let c033 = f.coeff(0, 3, 3);
    if c033 == rat(10, 3) || c033 == rat(-10, 3) {
        // Substituting [X : Y + Z : E(12)*(Y - Z)] into the Fermat sextic
        // gives X^6 + 12*Y^5*Z + 12*Y*Z^5 + 40*Y^3*Z^3; rescaling Y and Z to
        // make the quintic terms monic turns the middle coefficient into
        // one of +-10/3 depending on the chosen sixth root.
        return exact(
            GroupLabel::new(216, 92),
            "the curve is a coordinate change of the Fermat sextic",
        );
    }
    exact(GroupLabel::new(24, 10), "generic member of the family")
}

fn t7(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let c222 = f.coeff(2, 2, 2);
    if c222 == int(-5) {
        return exact(
            GroupLabel::new(168, 42),
            "the curve is the unique member with the full order-168 group",
        );
    }
    exact(GroupLabel::new(21, 1), "generic member of the family")
}

fn t6_12(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let c303 = f.coeff(3, 0, 3);
    let c222 = f.coeff(2, 2, 2);
    let c141 = f.coeff(1, 4, 1);
    if c303.is_zero() && c141.is_zero() {
        return exact(
            GroupLabel::new(72, 43),
            "only the corners and the central monomial remain",
        );
    }
    if c141.is_zero() && c222.is_zero() {
        if c303 == int(2) || c303 == int(-2) {
            return Err(cv(
                "the part in X and Z is a perfect square, so the curve is singular",
            ));
        }
        return exact(
            GroupLabel::new(36, 12),
            "the curve is a relabelling of the corners-plus-one-cross-term family",
        );
    }
    exact(GroupLabel::new(12, 4), "generic member of the family")
}

fn t6_13(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let c402 = f.coeff(4, 0, 2);
    let c033 = f.coeff(0, 3, 3);
    let c204 = f.coeff(2, 0, 4);
    let c231 = f.coeff(2, 3, 1);

    // A curve of this shape can coincide with the order-216 Hessian-type
    // curve only at one closed-form coefficient point. Solving the matching
    // conditions forces c033^2 = -50 and c231^3 = 900*c033, which has no
    // solution in any cyclotomic field (the cube root would generate a
    // non-abelian extension), so over the scalars handled here this branch
    // never fires; it is kept for completeness of the decision procedure.
    if c402.is_zero() {
        let hess = (|| -> Result<bool, StrataError> {
            Ok(c033.pow(2)? == int(-50)
                && c231.pow(3)? == int(900).try_mul(&c033)?
                && int(20).try_mul(&c204)? == c231.try_mul(&c033)?)
        })()?;
        if hess {
            return exact(
                GroupLabel::new(216, 153),
                "the coefficients match the order-216 Hessian-type curve",
            );
        }
    }
    if c402.is_zero() && c204.is_zero() && c231.is_zero() {
        if c033 == int(2) || c033 == int(-2) {
            return Err(cv(
                "the part in Y and Z is a perfect square, so the curve is singular",
            ));
        }
        return exact(
            GroupLabel::new(36, 12),
            "only the corners and one cross term remain",
        );
    }
    if c033.is_zero() && c231.is_zero() {
        if c402 == c204 {
            return Err(cv(
                "swapping the outer variables fixes the curve, extending the \
                 group beyond order 12",
            ));
        }
        return exact(
            GroupLabel::new(12, 5),
            "the curve is even in two variables with no further coincidences",
        );
    }
    generic(
        GroupLabel::tagged(6, 2, "mixed"),
        vec![
            GroupLabel::new(12, 5),
            GroupLabel::new(18, 3),
            GroupLabel::new(36, 12),
            GroupLabel::new(54, 5),
        ],
        "generic member; coincidences with larger strata require a coordinate \
         change that no closed-form test covers here",
    )
}

fn t6_01(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let a = |i: u32| f.coeff(i, 6 - i, 0);
    let (a6, a5, a4, a3, a2, a1, a0) = (a(6), a(5), a(4), a(3), a(2), a(1), a(0));

    if a5.is_zero() && a4.is_zero() && a2.is_zero() && a1.is_zero() {
        if a6.is_zero() || a0.is_zero() {
            return Err(cv("the curve passes through a vertex with multiplicity"));
        }
        if a3.pow(2)? == int(4).try_mul(&a6)?.try_mul(&a0)? {
            return Err(cv(
                "the binary part is a perfect square, so the curve is singular",
            ));
        }
        return exact(
            GroupLabel::new(36, 12),
            "the binary part is a quadratic in the cubes of the variables",
        );
    }

    if a5.is_zero() && a3.is_zero() && a1.is_zero() {
        if a6.is_zero() || a0.is_zero() {
            return Err(cv("the curve passes through a vertex with multiplicity"));
        }
        if a4.pow(3)?.try_mul(&a0)? == a2.pow(3)?.try_mul(&a6)? {
            return Err(cv(
                "a scaled swap of the first two variables fixes the even \
                 binary part, extending the group beyond order 12",
            ));
        }
        return exact(
            GroupLabel::new(12, 5),
            "the binary part is even with no further coincidences",
        );
    }

    // Probe for a swap X -> uY, Y -> vX fixing the binary part. Such a swap
    // exists precisely when the single scale s below satisfies all three
    // pairing conditions; when the middle coefficient vanishes the swap may
    // also negate the odd pairings.
    let s_candidate = if !a4.is_zero() {
        Some(a2.try_div(&a4)?)
    } else if !a5.is_zero() && !a1.is_zero() && !a6.is_zero() {
        Some(a5.try_mul(&a0)?.try_div(&a6.try_mul(&a1)?)?)
    } else {
        None
    };
    if let Some(s) = s_candidate {
        if !s.is_zero() {
            let corners = a6.try_mul(&s.pow(3)?)? == a0;
            let inner = a4.try_mul(&s)? == a2;
            let odd = a5.try_mul(&s.pow(2)?)?;
            let outer = odd == a1 || (a3.is_zero() && odd == neg(&a1));
            if corners && inner && outer {
                return exact(
                    GroupLabel::new(12, 5),
                    "a scaled swap of the first two variables fixes the curve",
                );
            }
        }
    }
    exact(
        GroupLabel::tagged(6, 2, "hom"),
        "the binary part has no scaled symmetry",
    )
}

fn t5_01(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let c510 = f.coeff(5, 1, 0);
    let c330 = f.coeff(3, 3, 0);
    let c150 = f.coeff(1, 5, 0);
    if c510.is_zero() && c330.is_zero() && c150.is_zero() {
        return Err(cv(
            "the binary part is even, so a substitution of order 10 fixes \
             the curve",
        ));
    }
    exact(
        GroupLabel::tagged(5, 1, "hom"),
        "the binary part breaks every sign symmetry",
    )
}

fn t5_14(
    f: &HomogPoly,
    ty: &TypeDescriptor,
    witness: &Witness,
    cat: &Catalogue,
) -> Result<ClassificationResult, StrataError> {
    let big = GroupLabel::new(60, 5);
    let Some(gamma) = witness.values.get("gamma") else {
        return generic(
            GroupLabel::new(10, 1),
            vec![big, GroupLabel::new(360, 118)],
            "generic member; pass gamma to test membership in the pencil of \
             order-60 curves",
        );
    };
    if gamma.is_zero() {
        return Err(rejected("gamma must be nonzero"));
    }
    let c411 = f.coeff(4, 1, 1);
    let c222 = f.coeff(2, 2, 2);
    let c033 = f.coeff(0, 3, 3);
    let g5 = gamma.pow(5)?;
    let ok = c411.try_mul(&gamma.pow(2)?)? == int(12).try_sub(&g5)?
        && c222.try_mul(&gamma.pow(4)?)? == int(48).try_add(&g5)?
        && c033.try_mul(&gamma.pow(6)?)? == int(64).try_sub(&int(2).try_mul(&g5)?)?;
    if !ok {
        return Err(rejected(
            "the coefficients do not lie on the claimed pencil at this gamma",
        ));
    }
    let empty = ParamMap::new();
    let sigma = ty.sigma()?;
    let swap = parse_matrix("[X : Z : Y]", &empty)?;
    let tau = parse_matrix(
        "[[1, 1, 1], [2, (-1 + RT(5))/2, (-1 - RT(5))/2], [2, (-1 - RT(5))/2, (-1 + RT(5))/2]]",
        &empty,
    )?;
    let two_over_g = int(2).try_div(gamma)?;
    let psi = ProjMatrix::diagonal(int(1), two_over_g.clone(), two_over_g)?;
    let mut carried = None;
    for orient in [psi.clone(), psi.inverse()] {
        let cand = tau.conjugate_by(&orient);
        if cand.automorphy_factor(f).is_some() {
            carried = Some(cand);
            break;
        }
    }
    let Some(tau_f) = carried else {
        return Err(rejected(
            "the rescaled extra generator does not fix the curve",
        ));
    };
    if sigma.automorphy_factor(f).is_none() || swap.automorphy_factor(f).is_none() {
        return Err(rejected("the claimed generators do not fix the curve"));
    }
    let grp = MatrixGroup::closure(&[sigma, swap, tau_f])?;
    if grp.order() != 60 {
        return Err(rejected(format!(
            "the claimed generators close into a group of order {}, not 60",
            grp.order()
        )));
    }
    match cat.identify(&grp.fingerprint()?) {
        Ok(l) if l == big => exact(big, "the pencil witness checks out"),
        _ => Err(rejected("the witnessed group is not the expected one")),
    }
}

fn t4_13(
    f: &HomogPoly,
    witness: &Witness,
    cat: &Catalogue,
) -> Result<ClassificationResult, StrataError> {
    let c033 = f.coeff(0, 3, 3);
    let c411 = f.coeff(4, 1, 1);
    let c204 = f.coeff(2, 0, 4);
    let c222 = f.coeff(2, 2, 2);
    let c240 = f.coeff(2, 4, 0);

    if c204 == neg(&c240) && !c204.is_zero() && c411.is_zero() && c033.is_zero() {
        return exact(
            GroupLabel::new(8, 4),
            "the antisymmetric cross terms admit the quaternion twist",
        );
    }

    if c204 == c240 {
        if witness.values.contains_key("t") || witness.values.contains_key("s") {
            return dihedral_witness(&c033, &c411, &c204, &c222, witness);
        }
        return generic(
            GroupLabel::new(8, 3),
            vec![GroupLabel::new(24, 12)],
            "generic symmetric member; pass t and c, or s and t, to test the \
             order-24 special members",
        );
    }

    if witness.values.contains_key("a") && witness.values.contains_key("b") {
        return hessian_witness(f, &c033, &c411, &c204, &c222, &c240, witness, cat);
    }
    generic(
        GroupLabel::new(4, 1),
        vec![GroupLabel::new(36, 9)],
        "generic member; pass a and b to test the order-36 special members",
    )
}

/// The two-parameter families of order-24 members inside the symmetric
/// branch of the order-four type. Either `t` and `c` (with `c` a fourth
/// root of unity) or `s` and `t` must be supplied.
fn dihedral_witness(
    c033: &FieldElem,
    c411: &FieldElem,
    c204: &FieldElem,
    c222: &FieldElem,
    witness: &Witness,
) -> Result<ClassificationResult, StrataError> {
    let label = GroupLabel::new(24, 12);
    if let (Some(t), Some(c)) = (witness.values.get("t"), witness.values.get("c")) {
        if t.is_zero() {
            return Err(rejected("t must be nonzero"));
        }
        if c.pow(4)? != int(1) {
            return Err(rejected("c must be a fourth root of unity"));
        }
        let ct6 = c.try_mul(&t.pow(6)?)?;
        let head = int(3).try_sub(&int(16).try_mul(&ct6)?)?;
        let t4 = t.pow(4)?;
        let mid = c411.try_mul(c)?.try_mul(&t.pow(2)?)? == head;
        let low = c033.try_mul(&ct6)?;
        let unit = int(1).try_sub(&int(2).try_mul(&ct6)?)?;
        let lhs = int(2).try_mul(&t4)?.try_mul(c204)?;
        let spread = t4.try_mul(c222)?;
        let plus = low == unit && mid && lhs == head.try_sub(&spread)?;
        let minus = low == neg(&unit) && mid && lhs == head.try_add(&spread)?;
        if plus || minus {
            return exact(label, "the two-parameter witness checks out");
        }
        return Err(rejected(
            "the coefficients do not match the order-24 family at (t, c)",
        ));
    }
    if let (Some(s), Some(t)) = (witness.values.get("s"), witness.values.get("t")) {
        if s.is_zero() || t.is_zero() {
            return Err(rejected("s and t must be nonzero"));
        }
        let i = zeta(4, 1);
        let q = s.try_div(t)?;
        let r = t.try_div(s)?;
        let ok = *c033 == q.pow(6)?.try_mul(&i)?.try_add(&int(2))?
            && *c411
                == neg(&int(16).try_mul(&r.pow(4)?)?)
                    .try_add(&int(3).try_mul(&i)?.try_mul(&q.pow(2)?)?)?
            && int(2).try_mul(c204)?
                == c222
                    .try_add(&int(3).try_mul(&q.pow(4)?)?)?
                    .try_add(&int(16).try_mul(&i)?.try_mul(&r.pow(2)?)?)?;
        if ok {
            return exact(label, "the two-parameter witness checks out");
        }
        return Err(rejected(
            "the coefficients do not match the order-24 family at (s, t)",
        ));
    }
    Err(rejected(
        "expected either t and c, or s and t, as witness values",
    ))
}

/// The two-parameter family of order-36 members of the order-four type.
/// Each sign family has five coefficient relations and two normalisation
/// side conditions; on success the witness also produces the coordinate
/// change onto the order-36 normal form, which is verified directly.
#[allow(clippy::too_many_arguments)]
fn hessian_witness(
    f: &HomogPoly,
    c033: &FieldElem,
    c411: &FieldElem,
    c204: &FieldElem,
    c222: &FieldElem,
    c240: &FieldElem,
    witness: &Witness,
    cat: &Catalogue,
) -> Result<ClassificationResult, StrataError> {
    let a = witness.values.get("a").expect("checked by caller");
    let b = witness.values.get("b").expect("checked by caller");
    if a.is_zero() || b.is_zero() {
        return Err(rejected("a and b must be nonzero"));
    }
    let r3 = zeta(12, 1).try_sub(&zeta(12, 5))?;
    let a4 = a.pow(4)?;
    let b4 = b.pow(4)?;
    let ab = a.try_mul(b)?;
    let a2b2 = ab.pow(2)?;

    struct Family {
        side1: FieldElem,
        side2: FieldElem,
        r033: FieldElem,
        r240: FieldElem,
        r204: FieldElem,
        r222: FieldElem,
        r411: FieldElem,
        f4_num: FieldElem,
        row1: FieldElem,
        row2: FieldElem,
    }

    let lin = |p: i64, q: i64| -> Result<FieldElem, StrataError> {
        Ok(int(p).try_mul(&r3)?.try_add(&int(q))?)
    };
    // Coefficient combinations shared by the two sign families.
    let mk = |sign: i64| -> Result<Family, StrataError> {
        let s = int(sign);
        let u = lin(1, 2 * sign)?; // r3 + 2 or r3 - 2, times the sign pattern
        let v = lin(1, -2 * sign)?;
        let w = lin(2, 3 * sign)?; // 2*r3 + 3 or 2*r3 - 3
        let x = lin(2, -3 * sign)?;
        let three_ab = int(3).try_mul(&ab)?;
        let side1 = three_ab.try_mul(&u.try_mul(&a4)?.try_sub(&v.try_mul(&b4)?)?)?;
        let side2 = three_ab.try_mul(&w.try_mul(&a4)?.try_add(&x.try_mul(&b4)?)?)?;
        let r033 = s.try_mul(&x.try_mul(&b4)?.try_sub(&w.try_mul(&a4)?)?)?;
        let heavy = int(9).try_mul(&lin(7 * sign, 12)?)?;
        let r240 = neg(&a.try_mul(&heavy.try_mul(&a4)?.try_add(&s.try_mul(&r3)?.try_mul(&b4)?)?)?);
        let heavy2 = int(9).try_mul(&lin(-7 * sign, 12)?)?;
        let r204 =
            neg(&b.try_mul(&heavy2.try_mul(&b4)?.try_sub(&s.try_mul(&r3)?.try_mul(&a4)?)?)?);
        let r222 = int(-15 * sign).try_mul(&v.try_mul(&b4)?.try_sub(&u.try_mul(&a4)?)?)?;
        let r411 = int(3 * sign).try_mul(&w.try_mul(&a4)?.try_sub(&x.try_mul(&b4)?)?)?;
        let f4_num = int(12 * sign).try_mul(&u.try_mul(&a4)?.try_add(&v.try_mul(&b4)?)?)?;
        let half = rat(1, 2);
        let row1 = neg(&half.try_mul(&lin(sign, 1)?)?); // -(1 +- r3)/2
        let row2 = neg(&half.try_mul(&lin(-sign, 1)?)?);
        Ok(Family {
            side1,
            side2,
            r033,
            r240,
            r204,
            r222,
            r411,
            f4_num,
            row1,
            row2,
        })
    };

    let eight_r3 = int(8).try_mul(&r3)?;
    for sign in [1i64, -1] {
        let fam = mk(sign)?;
        let relations = fam.side1 == int(8)
            && fam.side2 == eight_r3
            && int(3).try_mul(&a2b2)?.try_mul(c033)? == fam.r033
            && int(8).try_mul(&b.pow(3)?)?.try_mul(c240)? == fam.r240
            && int(8).try_mul(&a.pow(3)?)?.try_mul(c204)? == fam.r204
            && int(4).try_mul(&ab)?.try_mul(c222)? == fam.r222
            && int(2).try_mul(c411)? == fam.r411;
        if !relations {
            continue;
        }
        if b4 == a4 {
            return Err(rejected("a^4 and b^4 must differ"));
        }
        let f4 = fam.f4_num.try_div(&b4.try_sub(&a4)?)?;
        let mut params = ParamMap::new();
        params.insert("c411".into(), f4);
        let template = cat.instantiate_unchecked(cat.row("36_9")?, &params)?;
        let phi = ProjMatrix::new([
            [int(0), int(1), int(-1)],
            [a.clone(), a.try_mul(&fam.row1)?, a.try_mul(&fam.row1)?],
            [b.clone(), b.try_mul(&fam.row2)?, b.try_mul(&fam.row2)?],
        ])?;
        let image = phi.apply(f);
        let back = phi.inverse().apply(f);
        if proportional(&image, &template) || proportional(&back, &template) {
            return exact(
                GroupLabel::new(36, 9),
                "the two-parameter witness carries the curve onto the \
                 order-36 normal form",
            );
        }
        return Err(rejected(
            "the relations hold but the coordinate change does not map onto \
             the order-36 normal form",
        ));
    }
    Err(rejected(
        "the coefficients do not match the order-36 family at (a, b)",
    ))
}

/// Whether two nonzero forms agree up to a scalar.
fn proportional(p: &HomogPoly, q: &HomogPoly) -> bool {
    if p.is_zero() || q.is_zero() {
        return p.is_zero() && q.is_zero();
    }
    if p.len() != q.len() {
        return false;
    }
    let lead = q.support()[0];
    let pc = p.coeff(lead.i, lead.j, lead.k);
    let qc = q.coeff(lead.i, lead.j, lead.k);
    let Ok(lambda) = pc.try_div(&qc) else {
        return false;
    };
    if lambda.is_zero() {
        return false;
    }
    q.terms().all(|(m, c)| match c.try_mul(&lambda) {
        Ok(v) => p.coeff(m.i, m.j, m.k) == v,
        Err(_) => false,
    })
}

/// Both weight classes of the order-three type. Every automorphism of a
/// curve in these normal forms that is not ruled out by the maximality
/// assumption acts monomially, except on the order-twelve special members,
/// which are confirmed through the `lambda`/`mu` witness instead.
fn t3_12(
    f: &HomogPoly,
    ty: &TypeDescriptor,
    witness: &Witness,
    cat: &Catalogue,
) -> Result<ClassificationResult, StrataError> {
    let stab = monomial_stabilizer(f, ty.class)?;
    let mut max_ord = 1u64;
    for g in &stab {
        if !g.is_identity() {
            max_ord = max_ord.max(g.projective_order()?);
        }
    }
    if max_ord > 3 {
        return Err(cv(format!(
            "a monomial substitution of order {max_ord} fixes the curve, so \
             3 is not the maximal cyclic order"
        )));
    }
    match stab.len() {
        3 => icosahedral_witness(f, ty, witness),
        6 => exact(
            GroupLabel::new(6, 1),
            "one twisted transposition joins the visible order-three substitution",
        ),
        9 | 18 => {
            let grp = MatrixGroup::closure(&stab)?;
            let label = cat.identify(&grp.fingerprint()?)?;
            exact(label, "the monomial stabilizer is the full group")
        }
        n => Err(cv(format!(
            "unexpected monomial stabilizer of size {n}; the curve is not in \
             normal form"
        ))),
    }
}

/// All substitutions permuting the variables and rescaling them that could
/// fix a curve in the given weight class of the order-three type. For class
/// zero the corners force every scale to be a sixth root of unity; for
/// class one the cyclic core forces the scales into one cyclic family of
/// order 21.
fn monomial_stabilizer(f: &HomogPoly, class: u64) -> Result<Vec<ProjMatrix>, StrataError> {
    let mut found = Vec::new();
    let mut push = |p: &[usize; 3], d: &[FieldElem; 3]| -> Result<(), StrataError> {
        let mut rows = [
            [int(0), int(0), int(0)],
            [int(0), int(0), int(0)],
            [int(0), int(0), int(0)],
        ];
        for (i, &pi) in p.iter().enumerate() {
            rows[i][pi] = d[pi].clone();
        }
        let m = ProjMatrix::new(rows)?;
        if m.automorphy_factor(f).is_some() {
            found.push(m);
        }
        Ok(())
    };
    if class == 0 {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for p in &PERMS {
            for e1 in 0..6 {
                for e2 in 0..6 {
                    let d = [int(1), zeta(6, e1), zeta(6, e2)];
                    push(p, &d)?;
                }
            }
        }
    } else {
        const ROTATIONS: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
        for p in &ROTATIONS {
            for k in 0..21 {
                let d = [int(1), zeta(21, k), zeta(21, 17 * k)];
                push(p, &d)?;
            }
        }
    }
    Ok(found)
}

/// The order-twelve special members of the order-three families form a
/// two-parameter family in each weight class. The witness supplies the
/// parameters; the curve matches if its two coefficient orbits agree with
/// the predicted tuples up to independent cyclic alignment (the printed
/// orderings of the two orbits are not synchronised).
fn icosahedral_witness(
    f: &HomogPoly,
    ty: &TypeDescriptor,
    witness: &Witness,
) -> Result<ClassificationResult, StrataError> {
    let (Some(l), Some(m)) = (witness.values.get("lambda"), witness.values.get("mu")) else {
        return generic(
            GroupLabel::tagged(3, 1, "free"),
            vec![GroupLabel::new(12, 3)],
            "generic member; pass lambda and mu to test the order-twelve \
             special members",
        );
    };
    if l.is_zero() || m.is_zero() {
        return Err(rejected("lambda and mu must be nonzero"));
    }
    let l2 = l.pow(2)?;
    let m2 = m.pow(2)?;
    let l3 = l.pow(3)?;
    let m3 = m.pow(3)?;
    let l4 = l.pow(4)?;
    let m4 = m.pow(4)?;
    let l5 = l.pow(5)?;
    let m5 = m.pow(5)?;
    let l6 = l.pow(6)?;
    let m6 = m.pow(6)?;
    let lm = l.try_mul(m)?;

    let (first, second, extra_ok) = if ty.class == 0 {
        let t27 = |x: i64, cl: &FieldElem, cm: &FieldElem, den: &FieldElem| {
            let num = int(2).try_mul(
                &int(x)
                    .try_sub(&int(54).try_mul(cl)?)?
                    .try_add(cm)?,
            )?;
            num.try_div(&int(27).try_mul(den)?)
        };
        // First orbit: the three monomials X^4*Y*Z, X*Y*Z^4 wait, the orbit
        // of X^4*Y*Z under the cyclic rotation, read off at fixed slots.
        let t1 = t27(
            29,
            &l6.try_add(&m6)?,
            &int(0),
            &lm,
        )?;
        let t2 = t27(-52, &l6, &int(27).try_mul(&m6)?, &l.try_mul(&m4)?)?;
        let t3 = t27(-52, &m6, &int(27).try_mul(&l6)?, &l4.try_mul(m)?)?;
        let u_num = |p: &FieldElem, q: &FieldElem| -> Result<FieldElem, StrataError> {
            Ok(int(2).try_mul(
                &int(81)
                    .try_mul(p)?
                    .try_sub(&int(27).try_mul(q)?)?
                    .try_sub(&int(26))?,
            )?)
        };
        let u1 = u_num(&l6, &m6)?.try_div(&int(27).try_mul(&m3)?)?;
        let u2 = u_num(&m6, &l6)?.try_div(&int(27).try_mul(&l3)?)?;
        let u3 = int(2)
            .try_mul(
                &int(82)
                    .try_sub(&int(27).try_mul(&l6)?)?
                    .try_sub(&int(27).try_mul(&m6)?)?,
            )?
            .try_div(&int(27).try_mul(&l3.try_mul(&m3)?)?)?;
        let c222 = f.coeff(2, 2, 2);
        let want = int(9)
            .try_mul(&l6.try_add(&m6)?)?
            .try_add(&int(10))?
            .try_div(&int(3).try_mul(&l2.try_mul(&m2)?)?)?;
        (
            (
                [f.coeff(4, 1, 1), f.coeff(1, 1, 4), f.coeff(1, 4, 1)],
                [t1, t2, t3],
            ),
            (
                [f.coeff(3, 0, 3), f.coeff(3, 3, 0), f.coeff(0, 3, 3)],
                [u1, u2, u3],
            ),
            c222 == want,
        )
    } else {
        let t1 = l5
            .try_mul(m)?
            .try_add(&int(4).try_mul(&m5)?)?
            .try_div(&int(2).try_mul(&l4)?)?;
        let t2 = l
            .try_add(&int(4).try_mul(&l5.try_mul(m)?)?)?
            .try_div(&int(2).try_mul(&m2)?)?;
        let t3 = int(4)
            .try_mul(l)?
            .try_add(&m5)?
            .try_div(&int(2).try_mul(&l2.try_mul(&m4)?)?)?;
        let lm5 = l5.try_mul(m)?;
        let u1 = int(2)
            .try_mul(
                &int(2)
                    .try_mul(&lm5)?
                    .try_add(&int(2).try_mul(l)?)?
                    .try_add(&m5)?,
            )?
            .try_div(&l3.try_mul(&m2)?)?;
        let u2 = int(2)
            .try_mul(&lm5)?
            .try_add(&int(4).try_mul(l)?)?
            .try_add(&int(4).try_mul(&m5)?)?
            .try_div(&l2.try_mul(m)?)?;
        let u3 = int(2)
            .try_mul(
                &int(2)
                    .try_mul(&lm5)?
                    .try_add(l)?
                    .try_add(&int(2).try_mul(&m5)?)?,
            )?
            .try_div(&l.try_mul(&m3)?)?;
        (
            (
                [f.coeff(2, 4, 0), f.coeff(4, 0, 2), f.coeff(0, 2, 4)],
                [t1, t2, t3],
            ),
            (
                [f.coeff(1, 3, 2), f.coeff(3, 2, 1), f.coeff(2, 1, 3)],
                [u1, u2, u3],
            ),
            true,
        )
    };

    let rotates_onto = |actual: &[FieldElem; 3], target: &[FieldElem; 3]| {
        (0..3).any(|r| (0..3).all(|i| actual[(r + i) % 3] == target[i]))
    };
    if extra_ok && rotates_onto(&first.0, &first.1) && rotates_onto(&second.0, &second.1) {
        return exact(
            GroupLabel::new(12, 3),
            "the two-parameter witness places the curve on the order-twelve family",
        );
    }
    Err(rejected(
        "the coefficients do not match the order-twelve family at (lambda, mu)",
    ))
}

fn t3_01(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let cube_only = f.coeff(2, 1, 3).is_zero()
        && f.coeff(1, 2, 3).is_zero()
        && f.coeff(5, 1, 0).is_zero()
        && f.coeff(4, 2, 0).is_zero()
        && f.coeff(2, 4, 0).is_zero()
        && f.coeff(1, 5, 0).is_zero();
    if !cube_only {
        return exact(
            GroupLabel::tagged(3, 1, "hom"),
            "the equation is not a form in the cubes of the variables",
        );
    }
    let g = f.coeff(6, 0, 0);
    let e = f.coeff(0, 6, 0);
    if g.is_zero() || e.is_zero() {
        return Err(cv("the curve passes through a vertex with multiplicity"));
    }
    let c303 = f.coeff(3, 0, 3);
    let c033 = f.coeff(0, 3, 3);
    let c330 = f.coeff(3, 3, 0);
    let d1 = c303.pow(2)?.try_mul(&e)? == c033.pow(2)?.try_mul(&g)?;
    let d2 = c303.pow(2)?.try_mul(&e)? == c330.pow(2)?;
    let d3 = c033.pow(2)?.try_mul(&g)? == c330.pow(2)?;
    if d1 || d2 || d3 {
        return Err(cv(
            "a twisted transposition of the cube variables fixes the curve, \
             extending the group beyond order 9",
        ));
    }
    exact(
        GroupLabel::tagged(9, 2, "hom"),
        "the equation is a form in the cubes of the variables with no \
         twisted symmetry",
    )
}

fn t2_01(f: &HomogPoly) -> Result<ClassificationResult, StrataError> {
    let all_even = f.support().iter().all(|m| m.j % 2 == 0);
    if all_even {
        return exact(
            GroupLabel::new(4, 2),
            "the equation is even in two variables separately",
        );
    }
    exact(
        GroupLabel::new(2, 1),
        "only the declared involution survives",
    )
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::poly::parse_poly;
    use crate::strata::types::type_table;

    fn p(src: &str) -> HomogPoly {
        parse_poly(src, &ParamMap::new()).expect("test polynomial parses")
    }

    fn ty(m: u64, a: u64, b: u64, class: u64) -> TypeDescriptor {
        type_table()
            .into_iter()
            .find(|t| t.m == m && t.a == a && t.b == b && t.class == class)
            .expect("type exists")
    }

    fn cat() -> &'static Catalogue {
        Catalogue::builtin().expect("builtin catalogue loads")
    }

    fn run(src: &str, t: &TypeDescriptor) -> Result<ClassificationResult, StrataError> {
        classify(&p(src), t, &Witness::none(), cat())
    }

    fn run_with(
        src: &str,
        t: &TypeDescriptor,
        w: &Witness,
    ) -> Result<ClassificationResult, StrataError> {
        classify(&p(src), t, w, cat())
    }

    fn values(pairs: &[(&str, &str)]) -> Witness {
        let mut map = ParamMap::new();
        for (k, v) in pairs {
            map.insert(
                (*k).to_string(),
                parse_scalar(v, &ParamMap::new()).expect("witness value parses"),
            );
        }
        Witness::with_values(map)
    }

    #[test]
    fn rejects_wrong_degree() {
        let t = ty(6, 1, 2, 0);
        let err = classify(&p("X^2 + Y*Z"), &t, &Witness::none(), cat()).unwrap_err();
        assert!(matches!(err, StrataError::NotNormalForm(_)));
    }

    #[test]
    fn stray_monomials_are_named() {
        let t = ty(6, 1, 2, 0);
        let err = run("X^6 + Y^6 + Z^6 + X*Y^2*Z^3", &t).unwrap_err();
        match err {
            StrataError::NotNormalForm(msg) => assert!(msg.contains("X*Y^2*Z^3"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unit_core_must_be_monic() {
        let t = ty(4, 1, 3, 0);
        let err = run("2*X^6 + Y^5*Z + Y*Z^5", &t).unwrap_err();
        assert!(matches!(err, StrataError::NotNormalForm(_)));
    }

    #[test]
    fn corner_support_is_the_fermat_curve() {
        let t = ty(6, 1, 2, 0);
        let res = run("X^6 + Y^6 + Z^6", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(216, 92));
        assert_eq!(res.mode, ClassificationMode::Exact);

        // Scaled corners are a projective rescaling of the same curve.
        let t = ty(6, 0, 1, 0);
        let res = run("2*X^6 + 3*Y^6 + Z^6", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(216, 92));
    }

    #[test]
    fn refits_the_frame_when_the_class_is_rotated() {
        // The cross term pairs the second and third variables, so the
        // declared weight class only fits after renaming the variables.
        let t = ty(6, 0, 1, 0);
        let res = run("X^6 + Y^6 + Z^6 + 3*Y^3*Z^3", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(36, 12));
        assert_eq!(res.mode, ClassificationMode::Exact);
    }

    #[test]
    fn diagonal_escalation_is_caught() {
        let t = ty(6, 0, 1, 0);
        let err = run("Z^6 + X^6 + X*Y^5", &t).unwrap_err();
        match err {
            StrataError::ConstraintViolation(msg) => assert!(msg.contains("30"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn order_twelve_family_branches() {
        let t = ty(12, 1, 7, 0);
        let res = run("X^6 + Y^5*Z + Y*Z^5 + 10/3*Y^3*Z^3", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(216, 92));
        let res = run("X^6 + Y^5*Z + Y*Z^5 + Y^3*Z^3", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(24, 10));
    }

    #[test]
    fn order_fifteen_family_branches() {
        let t = ty(15, 5, 6, 0);
        let err = run("X^6 + Y^6 + X*Z^5 + 2*X^3*Y^3", &t).unwrap_err();
        assert!(matches!(err, StrataError::ConstraintViolation(_)));
        let res = run("X^6 + Y^6 + X*Z^5 + X^3*Y^3", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(15, 1));
    }

    #[test]
    fn order_seven_family_branches() {
        let t = ty(7, 1, 3, 1);
        let res = run("X^5*Y + Y^5*Z + X*Z^5 - 5*X^2*Y^2*Z^2", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(168, 42));
        let res = run("X^5*Y + Y^5*Z + X*Z^5 + 3*X^2*Y^2*Z^2", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(21, 1));
    }

    #[test]
    fn order_six_first_class_branches() {
        let t = ty(6, 1, 2, 0);
        let res = run("X^6 + Y^6 + Z^6 + 4*X^2*Y^2*Z^2", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(72, 43));
        let res = run("X^6 + Y^6 + Z^6 + 3*X^3*Z^3", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(36, 12));
        let res = run("X^6 + Y^6 + Z^6 + X^3*Z^3 + X^2*Y^2*Z^2 + X*Y^4*Z", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(12, 4));
        assert_eq!(res.mode, ClassificationMode::Exact);
    }

    #[test]
    fn order_six_second_class_branches() {
        let t = ty(6, 1, 3, 0);
        let res = run(
            "X^6 + Y^6 + Z^6 + X^4*Z^2 + Y^3*Z^3 + 2*X^2*Z^4 + X^2*Y^3*Z",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::tagged(6, 2, "mixed"));
        assert_eq!(res.mode, ClassificationMode::Generic);
        assert_eq!(res.undecided.len(), 4);

        let res = run("X^6 + Y^6 + Z^6 + X^4*Z^2 + 2*X^2*Z^4", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(12, 5));

        let err = run("X^6 + Y^6 + Z^6 + X^4*Z^2 + X^2*Z^4", &t).unwrap_err();
        assert!(matches!(err, StrataError::ConstraintViolation(_)));
    }

    #[test]
    fn semihomogeneous_branches() {
        let t = ty(6, 0, 1, 0);
        let res = run("Z^6 + X^6 + Y^6 + X^5*Y + 3*X^2*Y^4", &t).unwrap();
        assert_eq!(res.label, GroupLabel::tagged(6, 2, "hom"));
        assert_eq!(res.mode, ClassificationMode::Exact);

        let res = run("Z^6 + X^6 + Y^6 + X^4*Y^2 + 5*X^2*Y^4", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(12, 5));

        let res = run(
            "Z^6 + X^6 + 2*X^5*Y + 3*X^4*Y^2 + X^3*Y^3 + 3*X^2*Y^4 + 2*X*Y^5 + Y^6",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::new(12, 5));

        let res = run("Z^6 + X^6 + 5*X^3*Y^3 + Y^6", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(36, 12));

        let err = run("Z^6 + X^6 + 2*X^3*Y^3 + Y^6", &t).unwrap_err();
        assert!(matches!(err, StrataError::ConstraintViolation(_)));
    }

    #[test]
    fn parity_family_branches() {
        let t = ty(2, 0, 1, 0);
        let res = run("Z^6 + X^6 + Y^6 + X^4*Y^2 + 3*X^2*Y^2*Z^2", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(4, 2));
        let res = run("Z^6 + X^6 + Y^6 + X^5*Y + 3*X^2*Y^2*Z^2", &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(2, 1));
    }

    #[test]
    fn cube_form_branches() {
        let t = ty(3, 0, 1, 0);
        let res = run("Z^6 + X^6 + Y^6 + X^2*Y*Z^3 + X^3*Y^3", &t).unwrap();
        assert_eq!(res.label, GroupLabel::tagged(3, 1, "hom"));

        let res = run(
            "Z^6 + X^6 + Y^6 + X^3*Z^3 + 2*Y^3*Z^3 + 3*X^3*Y^3",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::tagged(9, 2, "hom"));

        let err = run("Z^6 + X^6 + Y^6 + X^3*Z^3 + Y^3*Z^3 + 3*X^3*Y^3", &t).unwrap_err();
        assert!(matches!(err, StrataError::ConstraintViolation(_)));
    }

    #[test]
    fn order_three_stabilizer_sizes() {
        // Y and Z enter symmetrically, so one twisted transposition survives.
        let t = ty(3, 1, 2, 0);
        let res = run(
            "X^6 + Y^6 + Z^6 + X^4*Y*Z + X^3*Y^3 + X^3*Z^3 + X^2*Y^2*Z^2 \
             + 2*X*Y^4*Z + 2*X*Y*Z^4 + 2*Y^3*Z^3",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::new(6, 1));
        assert_eq!(res.mode, ClassificationMode::Exact);

        // Generic member of the other weight class: nothing extra survives.
        let t = ty(3, 1, 2, 1);
        let res = run(
            "X^5*Y + Y^5*Z + X*Z^5 + X^2*Y^4 + 2*X*Y^3*Z^2",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::tagged(3, 1, "free"));
        assert_eq!(res.mode, ClassificationMode::Generic);
        assert_eq!(res.undecided, vec![GroupLabel::new(12, 3)]);
    }

    #[test]
    fn full_monomial_stabilizers_are_identified() {
        // Totally symmetric cubes with one parameter value each: the
        // stabilizer has order 18 in the first class.
        let t = ty(3, 1, 2, 0);
        let res = run(
            "X^6 + Y^6 + Z^6 + X*Y*Z*(X^3 + Y^3 + Z^3) \
             + X^3*Y^3 + Y^3*Z^3 + X^3*Z^3 + X^2*Y^2*Z^2",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::new(18, 4));

        // The rotation-invariant member of the second class keeps order 9.
        let t = ty(3, 1, 2, 1);
        let res = run(
            "X^5*Y + Y^5*Z + X*Z^5 + X^2*Y^4 + Y^2*Z^4 + X^4*Z^2 \
             + 2*X*Y^3*Z^2 + 2*X^2*Y*Z^3 + 2*X^3*Y^2*Z",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::tagged(9, 2, "free"));
    }

    #[test]
    fn icosahedral_witness_confirms_order_twelve() {
        let t = ty(3, 1, 2, 1);
        let src = "X^5*Y + Y^5*Z + X*Z^5 + 65*X^2*Y^4 + 9/8*X^4*Z^2 + 9/8*Y^2*Z^4 \
                   + 68*X^3*Y^2*Z + 19*X*Y^3*Z^2 + 69/4*X^2*Y*Z^3";
        let res = run_with(src, &t, &values(&[("lambda", "1"), ("mu", "2")])).unwrap();
        assert_eq!(res.label, GroupLabel::new(12, 3));
        assert_eq!(res.mode, ClassificationMode::Exact);

        let err = run_with(src, &t, &values(&[("lambda", "1"), ("mu", "3")])).unwrap_err();
        assert!(matches!(err, StrataError::WitnessRejected(_)));
    }

    #[test]
    fn quaternion_and_dihedral_branches() {
        let t = ty(4, 1, 3, 0);
        let res = run(
            "X^6 + Y^5*Z + Y*Z^5 + X^2*Z^4 - X^2*Y^4 + X^2*Y^2*Z^2",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::new(8, 4));

        let sym = "X^6 + Y^5*Z + Y*Z^5 - Y^3*Z^3 - 13*X^4*Y*Z + X^2*Y^2*Z^2 \
                   - 7*X^2*Y^4 - 7*X^2*Z^4";
        let res = run(sym, &ty(4, 1, 3, 0)).unwrap();
        assert_eq!(res.label, GroupLabel::new(8, 3));
        assert_eq!(res.mode, ClassificationMode::Generic);
        assert_eq!(res.undecided, vec![GroupLabel::new(24, 12)]);

        let res = run_with(sym, &ty(4, 1, 3, 0), &values(&[("t", "1"), ("c", "1")])).unwrap();
        assert_eq!(res.label, GroupLabel::new(24, 12));
        assert_eq!(res.mode, ClassificationMode::Exact);

        let err =
            run_with(sym, &ty(4, 1, 3, 0), &values(&[("t", "1"), ("c", "E(4)")])).unwrap_err();
        assert!(matches!(err, StrataError::WitnessRejected(_)));
    }

    #[test]
    fn hessian_witness_rejects_mismatched_parameters() {
        let t = ty(4, 1, 3, 0);
        let generic_member = "X^6 + Y^5*Z + Y*Z^5 + Y^3*Z^3 + X^4*Y*Z + X^2*Z^4 \
                              + X^2*Y^2*Z^2 + 2*X^2*Y^4";
        let res = run(generic_member, &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(4, 1));
        assert_eq!(res.undecided, vec![GroupLabel::new(36, 9)]);

        let err = run_with(generic_member, &t, &values(&[("a", "1"), ("b", "1")])).unwrap_err();
        assert!(matches!(err, StrataError::WitnessRejected(_)));
    }

    #[test]
    fn pencil_membership_needs_a_witness() {
        let t = ty(5, 1, 4, 0);
        let member = "X^6 + X*Z^5 + X*Y^5 - 5*X^4*Y*Z + 5*X^2*Y^2*Z^2";
        let res = run(member, &t).unwrap();
        assert_eq!(res.label, GroupLabel::new(10, 1));
        assert_eq!(res.mode, ClassificationMode::Generic);
        assert_eq!(res.undecided.len(), 2);

        let res = run_with(member, &t, &values(&[("gamma", "2")])).unwrap();
        assert_eq!(res.label, GroupLabel::new(60, 5));
        assert_eq!(res.mode, ClassificationMode::Exact);

        let err = run_with(member, &t, &values(&[("gamma", "3")])).unwrap_err();
        assert!(matches!(err, StrataError::WitnessRejected(_)));
    }

    #[test]
    fn quintic_line_is_absorbed() {
        let t = ty(5, 0, 1, 0);
        // The Z^5 factor multiplies X + Y; shearing it away leaves a clean
        // semihomogeneous equation with a mixed-parity binary part.
        let res = run("X*Z^5 + Y*Z^5 + X^6 + 3*X^2*Y^4", &t).unwrap();
        assert_eq!(res.label, GroupLabel::tagged(5, 1, "hom"));

        let err = run("Y*Z^5 + X^6 + Y^6 + X^4*Y^2", &t).unwrap_err();
        match err {
            StrataError::ConstraintViolation(msg) => assert!(msg.contains("10"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn final_family_needs_no_conditions() {
        let t = ty(5, 1, 2, 0);
        let res = run(
            "X^6 + X*Z^5 + X*Y^5 + X^3*Y*Z^2 + X^2*Y^3*Z + Y^2*Z^4",
            &t,
        )
        .unwrap();
        assert_eq!(res.label, GroupLabel::tagged(5, 1, "free"));
        assert_eq!(res.mode, ClassificationMode::Exact);
    }

    #[test]
    fn conjugation_witness_confirms_a_target() {
        let t = ty(6, 1, 2, 0);
        let id = ProjMatrix::identity();
        let mut w = Witness::none();
        w.conjugator = Some(id.clone());
        w.target = Some(GroupLabel::new(216, 92));
        let res = run_with("X^6 + Y^6 + Z^6", &t, &w).unwrap();
        assert_eq!(res.label, GroupLabel::new(216, 92));
        assert_eq!(res.mode, ClassificationMode::Exact);

        let mut w = Witness::none();
        w.conjugator = Some(id);
        w.target = Some(GroupLabel::new(216, 153));
        let err = run_with("X^6 + Y^6 + Z^6", &t, &w).unwrap_err();
        assert!(matches!(err, StrataError::WitnessRejected(_)));
    }

    #[test]
    fn support_classes_cover_every_type() {
        // Every declared unit core lies inside its own weight class.
        for t in type_table() {
            let core: BTreeSet<Monomial> = unit_core(&t).into_iter().collect();
            assert!(
                core.is_subset(&t.monomials),
                "core of {} escapes its class",
                t.name()
            );
        }
    }
}
