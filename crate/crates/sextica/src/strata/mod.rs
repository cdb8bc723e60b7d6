//! The stratification of smooth plane sextics by automorphism group.
//!
//! A sextic whose automorphism group is nontrivial admits a diagonal normal
//! form fixed by a cyclic automorphism of maximal projective order; the
//! twenty possibilities are enumerated by [`types`].  The full list of
//! automorphism groups, together with defining equations, generators,
//! parameter constraints, and the inclusions between strata, ships as a
//! versioned data file loaded by [`catalogue`].  [`classify`] decides the
//! automorphism group of a normal-form member from its coefficients, and
//! [`poset`] re-derives every inclusion edge.  The two computations that do
//! not fit the tabular shape live in [`wiman`] (the order-360 group) and
//! [`appendix`] (the subgroup pairs inside the Fermat sextic's group).

pub mod appendix;
pub mod catalogue;
pub mod classify;
pub mod poset;
pub mod types;
pub mod wiman;

pub use catalogue::{Catalogue, StratumRow};
pub use classify::{classify, ClassificationMode, ClassificationResult, Witness};
pub use poset::{EdgeKind, PosetEdge};
pub use types::{invariant_monomials, type_table, TypeDescriptor};

use crate::cyclo::CycloError;
use crate::pgl::PglError;
use crate::poly::PolyError;
use crate::smooth::SmoothError;

#[derive(Debug, thiserror::Error)]
pub enum StrataError {
    /// A row key or group label is absent from the catalogue.
    #[error("no catalogue row named {0:?}")]
    UnknownRow(String),
    /// No normal form matches the requested order and exponents.
    #[error("no normal form of type {0},({1},{2})")]
    UnknownType(u64, u64, u64),
    /// A template placeholder was left unbound.
    #[error("missing parameter {0:?}")]
    MissingParameter(String),
    /// The parameters land outside the stratum.
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    /// A supplied witness fails its defining equations.
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    /// The input polynomial is not a member of the expected normal form.
    #[error("not in normal form: {0}")]
    NotNormalForm(String),
    /// The declared cyclic automorphism does not fix the curve.
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    /// An inclusion edge relates orders that do not divide.
    #[error("divisibility failure: {0}")]
    DivisibilityFailure(String),
    /// An inclusion edge's stored witness does not check out.
    #[error("witness failure: {0}")]
    WitnessFailure(String),
    /// The shipped data file is internally inconsistent.
    #[error("catalogue corrupt: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Pgl(#[from] PglError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Smooth(#[from] SmoothError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}
