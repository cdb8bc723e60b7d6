//! Diagonal normal forms for sextics with a cyclic automorphism.
//!
//! The automorphism `diag(1, E(m)^a, E(m)^b)` multiplies the monomial
//! `X^i Y^j Z^k` by `E(m)^(a*j + b*k)`, so it fixes a sextic exactly when
//! the support sits inside a single weight class mod `m`.  Conversely, a
//! sextic whose group contains an element of order `m` can be moved by a
//! coordinate change into one of finitely many such normal forms; the table
//! returned by [`type_table`] lists the twenty that occur, ordered by
//! decreasing `m`, with the weight class each family occupies.

use std::collections::{BTreeMap, BTreeSet};

use crate::cyclo::FieldElem;
use crate::pgl::ProjMatrix;
use crate::poly::{mono, Monomial};

use super::StrataError;

/// One row of the normal-form table: the cyclic order `m`, the exponents of
/// the distinguished diagonal automorphism, and the monomials available to
/// members of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDescriptor {
    /// Position in the normal-form table, starting at 1.
    pub row_index: u32,
    /// Projective order of the distinguished automorphism.
    pub m: u64,
    /// The automorphism is `diag(1, E(m)^a, E(m)^b)`.
    pub a: u64,
    pub b: u64,
    /// Weight class mod `m` that the family's support occupies.
    pub class: u64,
    /// All degree-six monomials of that weight class.
    pub monomials: BTreeSet<Monomial>,
}

impl TypeDescriptor {
    /// The distinguished automorphism `diag(1, E(m)^a, E(m)^b)`.
    pub fn sigma(&self) -> Result<ProjMatrix, StrataError> {
        let sigma = ProjMatrix::diagonal(
            FieldElem::one(),
            FieldElem::root_of_unity(self.m, self.a as i64),
            FieldElem::root_of_unity(self.m, self.b as i64),
        )?;
        Ok(sigma)
    }

    /// The conventional display name, e.g. `6,(1,3)`.
    pub fn name(&self) -> String {
        format!("{},({},{})", self.m, self.a, self.b)
    }
}

/// Splits the 28 degree-six monomials into weight classes under
/// `diag(1, E(m)^a, E(m)^b)`: the monomial `X^i Y^j Z^k` lands in class
/// `(a*j + b*k) mod m`.
pub fn invariant_monomials(m: u64, a: u64, b: u64) -> BTreeMap<u64, BTreeSet<Monomial>> {
    assert!(m > 0, "cyclic order must be positive");
    let mut classes: BTreeMap<u64, BTreeSet<Monomial>> = BTreeMap::new();
    for i in 0..=6u32 {
        for j in 0..=(6 - i) {
            let k = 6 - i - j;
            let class = (a * u64::from(j) + b * u64::from(k)) % m;
            classes.entry(class).or_default().insert(mono(i, j, k));
        }
    }
    classes
}

/// The twenty normal forms, ordered as in the published table.  Two rows
/// share `3,(1,2)`: row 17 is the family through the Klein-type quintic
/// pattern (class 1) and row 18 the family through the Fermat sextic
/// (class 0); their supports are disjoint.
pub fn type_table() -> Vec<TypeDescriptor> {
    const ROWS: [(u64, u64, u64, u64); 20] = [
        (30, 5, 6, 0),
        (25, 1, 20, 0),
        (24, 1, 19, 0),
        (21, 1, 17, 1),
        (15, 5, 6, 0),
        (12, 1, 7, 0),
        (10, 5, 6, 0),
        (8, 1, 3, 0),
        (7, 1, 3, 1),
        (6, 1, 2, 0),
        (6, 1, 3, 0),
        (6, 0, 1, 0),
        (5, 1, 2, 0),
        (5, 1, 4, 0),
        (5, 0, 1, 0),
        (4, 1, 3, 0),
        (3, 1, 2, 1),
        (3, 1, 2, 0),
        (3, 0, 1, 0),
        (2, 0, 1, 0),
    ];
    ROWS.iter()
        .enumerate()
        .map(|(n, &(m, a, b, class))| {
            let monomials = invariant_monomials(m, a, b)
                .remove(&class)
                .unwrap_or_default();
            TypeDescriptor {
                row_index: n as u32 + 1,
                m,
                a,
                b,
                class,
                monomials,
            }
        })
        .collect()
}

/// Finds the table rows with the given order and exponents.  `3,(1,2)`
/// returns two rows; every other triple returns at most one.
pub fn types_for(m: u64, a: u64, b: u64) -> Vec<TypeDescriptor> {
    type_table()
        .into_iter()
        .filter(|t| t.m == m && t.a == a && t.b == b)
        .collect()
}

/// The parameter name conventionally attached to a monomial's coefficient:
/// `X^i Y^j Z^k` is written `c` followed by the exponents, e.g. `c411`.
pub fn param_name(m: Monomial) -> String {
    format!("c{}{}{}", m.i, m.j, m.k)
}

/// Inverse of [`param_name`]: accepts `c` followed by three digits summing
/// to six.
pub fn param_monomial(name: &str) -> Option<Monomial> {
    let digits = name.strip_prefix('c')?;
    let bytes = digits.as_bytes();
    if bytes.len() != 3 || !bytes.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let (i, j, k) = (
        u32::from(bytes[0] - b'0'),
        u32::from(bytes[1] - b'0'),
        u32::from(bytes[2] - b'0'),
    );
    if i + j + k != 6 {
        return None;
    }
    Some(mono(i, j, k))
}
