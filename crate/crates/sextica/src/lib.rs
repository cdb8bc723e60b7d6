//! Exact computation with the automorphism groups of smooth plane sextic curves.
//!
//! Everything is exact: curve coefficients live in cyclotomic fields (with an
//! optional quadratic radical on top), matrices act projectively with canonical
//! scaling, smoothness goes through the Macaulay resultant of the partials, and
//! group structure is read off finite closures. No floats anywhere.

pub mod cyclo;
pub mod expr;
pub mod pgl;
pub mod poly;
pub mod report;
pub mod smooth;
pub mod strata;
