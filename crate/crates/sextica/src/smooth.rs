//! Smoothness testing for plane sextics.
//!
//! A sextic is smooth exactly when the resultant of its three partial
//! derivatives is nonzero.  The resultant of three quintics is computed by
//! Macaulay's construction: a 105x105 determinant `D` indexed by the degree-13
//! monomials, together with a 30x30 minor `E` on the monomials divisible by at
//! least two of `X^5, Y^5, Z^5`, so that `D = Res * E`.
//!
//! The default strategy reduces the determinant modulo a few primes that
//! split the coefficient field.  A nonzero value modulo any prime certifies
//! smoothness outright.  If every reduction vanishes, the curve is reported
//! as likely singular, and an exact determinant over the coefficient field
//! settles the question on request.

use num::{BigInt, One, Signed, Zero};

use crate::cyclo::field::FieldElem;
use crate::cyclo::modp::ModContext;
use crate::cyclo::{nt, CycloError, CycloNum, Rat};
use crate::poly::{mono, HomogPoly, Monomial};

/// Total degree of the Macaulay row and column monomials for three quintics.
const SUPPORT_DEGREE: u32 = 13;

/// Lower bound for the moduli, so that small integer coefficients cannot
/// vanish accidentally.
const MIN_PRIME: u64 = 1_000;

/// How many candidate moduli to examine before giving up.
const PRIME_SEARCH_LIMIT: u64 = 200_000;

#[derive(Debug, thiserror::Error)]
pub enum SmoothError {
    #[error("smoothness test expects a sextic, got degree {0}")]
    WrongDegree(u32),
    #[error("the zero form has no associated curve")]
    ZeroForm,
    #[error("no usable prime splits the coefficient field of conductor {0}")]
    NoSuitablePrime(u64),
    #[error("the extraneous minor vanished in every coordinate frame")]
    Inconclusive,
    #[error(transparent)]
    Arith(#[from] CycloError),
}

/// Outcome of a smoothness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothnessVerdict {
    /// The resultant is provably nonzero; `prime` names the modulus that
    /// certified it, or `None` for an exact determinant.
    Smooth { prime: Option<u64> },
    /// The resultant is exactly zero.
    Singular,
    /// Every tested reduction vanished but no exact computation was run.
    LikelySingular { primes: Vec<u64> },
}

impl SmoothnessVerdict {
    pub fn is_smooth(&self) -> bool {
        matches!(self, SmoothnessVerdict::Smooth { .. })
    }
}

/// All monomials of the given degree in descending graded-lex order.
fn degree_monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push(mono(i, j, d - i - j));
        }
    }
    out
}

/// The Macaulay rows: one degree-13 form per row monomial, using the first
/// of `F_X, F_Y, F_Z` whose distinguished power divides the monomial.
fn macaulay_rows(f: &HomogPoly) -> Vec<HomogPoly> {
    let (fx, fy, fz) = f.partials();
    degree_monomials(SUPPORT_DEGREE)
        .into_iter()
        .map(|u| {
            if u.i >= 5 {
                fx.mul_monomial(mono(u.i - 5, u.j, u.k))
            } else if u.j >= 5 {
                fy.mul_monomial(mono(u.i, u.j - 5, u.k))
            } else {
                fz.mul_monomial(mono(u.i, u.j, u.k - 5))
            }
        })
        .collect()
}

/// Positions of the row monomials divisible by at least two of the
/// distinguished fifth powers; these index the extraneous minor.
fn extraneous_positions() -> Vec<usize> {
    degree_monomials(SUPPORT_DEGREE)
        .iter()
        .enumerate()
        .filter(|(_, u)| [u.i >= 5, u.j >= 5, u.k >= 5].iter().filter(|b| **b).count() >= 2)
        .map(|(pos, _)| pos)
        .collect()
}

fn check_sextic(f: &HomogPoly) -> Result<(), SmoothError> {
    if f.degree() != 6 {
        return Err(SmoothError::WrongDegree(f.degree()));
    }
    if f.is_zero() {
        return Err(SmoothError::ZeroForm);
    }
    Ok(())
}

/// The Macaulay determinant and its extraneous factor, computed exactly.
/// The true resultant of the partials is the quotient `D / E` whenever
/// `E` is nonzero.
pub fn resultant_parts(f: &HomogPoly) -> Result<(FieldElem, FieldElem), SmoothError> {
    check_sextic(f)?;
    let columns = degree_monomials(SUPPORT_DEGREE);
    let rows = macaulay_rows(f);
    let grid: Vec<Vec<FieldElem>> = rows
        .iter()
        .map(|poly| columns.iter().map(|c| poly.coeff(c.i, c.j, c.k)).collect())
        .collect();
    let minor_pos = extraneous_positions();
    let minor: Vec<Vec<FieldElem>> = minor_pos
        .iter()
        .map(|&r| minor_pos.iter().map(|&c| grid[r][c].clone()).collect())
        .collect();
    let d = det_field(grid)?;
    let e = det_field(minor)?;
    Ok((d, e))
}

/// Decides smoothness.  Tries up to `prime_count` modular reductions first;
/// any nonzero determinant certifies a smooth curve.  When every reduction
/// vanishes, an exact determinant is computed if `exact` is set, otherwise
/// the verdict stays at `LikelySingular`.
pub fn is_smooth(f: &HomogPoly, prime_count: usize, exact: bool) -> Result<SmoothnessVerdict, SmoothError> {
    check_sextic(f)?;

    // A form missing a variable vanishes to order two at the corresponding
    // coordinate point, along with both partials involving it.
    for v in [crate::expr::Var::X, crate::expr::Var::Y, crate::expr::Var::Z] {
        if !f.uses_variable(v) {
            return Ok(SmoothnessVerdict::Singular);
        }
    }

    let mut vanished = Vec::new();
    if prime_count > 0 {
        if let Some(outcome) = modular_pass(f, prime_count, &mut vanished)? {
            return Ok(outcome);
        }
    }
    if !exact {
        return Ok(SmoothnessVerdict::LikelySingular { primes: vanished });
    }

    for frame in decision_frames() {
        let g = f.substitute_rows(&frame);
        let (d, e) = resultant_parts(&g)?;
        if !d.is_zero() {
            return Ok(SmoothnessVerdict::Smooth { prime: None });
        }
        if !e.is_zero() {
            return Ok(SmoothnessVerdict::Singular);
        }
    }
    Err(SmoothError::Inconclusive)
}

/// Runs the modular reductions.  Returns `Some` on a definite answer,
/// `None` if every determinant vanished (with the moduli recorded in
/// `vanished`).
fn modular_pass(
    f: &HomogPoly,
    prime_count: usize,
    vanished: &mut Vec<u64>,
) -> Result<Option<SmoothnessVerdict>, SmoothError> {
    let mut conductor: u64 = 1;
    let mut radicand: Option<&CycloNum> = None;
    for (_, c) in f.terms() {
        conductor = nt::lcm(conductor, c.conductor());
        if let Some((_, delta)) = c.radical_part() {
            match radicand {
                None => radicand = Some(delta),
                Some(seen) if seen == delta => {}
                // Mixed radicands never reduce to one context; leave the
                // decision to the exact path.
                Some(_) => return Ok(None),
            }
        }
    }

    let columns = degree_monomials(SUPPORT_DEGREE);
    let col_index: std::collections::HashMap<Monomial, usize> =
        columns.iter().enumerate().map(|(pos, m)| (*m, pos)).collect();

    // Sparse forms can make the determinant vanish identically in one frame
    // even though the resultant is nonzero, so each prime gets a shot at
    // every frame before it counts as evidence of a singularity.
    let framed_rows: Vec<Vec<HomogPoly>> = decision_frames()
        .iter()
        .map(|frame| macaulay_rows(&f.substitute_rows(frame)))
        .collect();

    let mut found = 0usize;
    let mut k = MIN_PRIME / conductor + 1;
    let search_end = k + PRIME_SEARCH_LIMIT;
    while found < prime_count && k < search_end {
        let p = k * conductor + 1;
        k += 1;
        if !nt::is_prime(p) {
            continue;
        }
        let ctx = match ModContext::new(p, conductor) {
            Ok(ctx) => ctx,
            Err(_) => continue,
        };
        let ctx = match radicand {
            Some(delta) => match ctx.with_radical(delta) {
                Ok(ctx) => ctx,
                Err(CycloError::NonResidue { .. }) => continue,
                Err(e) => return Err(e.into()),
            },
            None => ctx,
        };
        let mut usable = true;
        'frames: for rows in &framed_rows {
            let mut grid: Vec<Vec<u64>> = vec![vec![0; columns.len()]; rows.len()];
            for (r, poly) in rows.iter().enumerate() {
                for (m, c) in poly.terms() {
                    match ctx.reduce_field(c) {
                        Ok(v) => grid[r][col_index[m]] = v,
                        Err(CycloError::DenominatorClash { .. }) => {
                            usable = false;
                            break 'frames;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            if det_mod(grid, p) != 0 {
                return Ok(Some(SmoothnessVerdict::Smooth { prime: Some(p) }));
            }
        }
        if !usable {
            continue;
        }
        vanished.push(p);
        found += 1;
    }
    if found == 0 && vanished.is_empty() {
        return Err(SmoothError::NoSuitablePrime(conductor));
    }
    Ok(None)
}

/// Coordinate frames for the exact decision: the six variable permutations,
/// then two integer shears to escape degenerate minors.
fn decision_frames() -> Vec<[[FieldElem; 3]; 3]> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut frames = Vec::new();
    for perm in perms {
        let mut rows = std::array::from_fn(|_| std::array::from_fn(|_| FieldElem::zero()));
        for (r, &c) in perm.iter().enumerate() {
            rows[r][c] = FieldElem::one();
        }
        frames.push(rows);
    }
    for shear in [[[1, 0, 0], [1, 1, 0], [0, 1, 1]], [[1, 2, 1], [0, 1, 3], [0, 0, 1]]] {
        frames.push(std::array::from_fn(|r| std::array::from_fn(|c| FieldElem::from(shear[r][c]))));
    }
    frames
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det: u64 = 1;
    let mut negate = false;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| a[r][k] % p != 0) else {
            return 0;
        };
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        det = mul_mod(det, a[k][k], p);
        let inv = nt::mod_inv(a[k][k], p).expect("pivot is a unit");
        for i in k + 1..n {
            if a[i][k] % p == 0 {
                continue;
            }
            let factor = mul_mod(a[i][k], inv, p);
            for j in k..n {
                let sub = mul_mod(factor, a[k][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
    }
    if negate {
        (p - det) % p
    } else {
        det
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Exact determinant.  Matrices with all-rational entries go through
/// fraction-free Bareiss elimination over the integers; anything else falls
/// back to Gaussian elimination over the coefficient field.
fn det_field(m: Vec<Vec<FieldElem>>) -> Result<FieldElem, CycloError> {
    if let Some(rational) = m
        .iter()
        .map(|row| row.iter().map(|e| e.as_rational()).collect::<Option<Vec<Rat>>>())
        .collect::<Option<Vec<Vec<Rat>>>>()
    {
        return Ok(FieldElem::from(det_rational(rational)));
    }
    det_generic(m)
}

fn det_rational(m: Vec<Vec<Rat>>) -> Rat {
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .into_iter()
        .map(|row| {
            let common = row
                .iter()
                .fold(BigInt::one(), |acc, e| num::integer::lcm(acc, e.denom().clone()));
            scale *= &common;
            row.into_iter().map(|e| (e * Rat::from(common.clone())).to_integer()).collect()
        })
        .collect();
    Rat::new(det_bareiss(rows), scale)
}

fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn det_generic(mut m: Vec<Vec<FieldElem>>) -> Result<FieldElem, CycloError> {
    let n = m.len();
    let mut det = FieldElem::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(FieldElem::zero());
        };
        if pivot != k {
            m.swap(pivot, k);
            negate = !negate;
        }
        det = det.try_mul(&m[k][k])?;
        let inv = m[k][k].inv()?;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].try_mul(&inv)?;
            for j in k..n {
                let sub = factor.try_mul(&m[k][j])?;
                m[i][j] = m[i][j].try_sub(&sub)?;
            }
        }
    }
    Ok(if negate { -det } else { det })
}
