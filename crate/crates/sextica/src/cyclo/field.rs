//! Cyclotomic numbers extended by at most one quadratic radical.
//!
//! A [`FieldElem`] is base + coeff*t with t^2 = radicand, radicand a fixed
//! non-rational cyclotomic number shared by every element of a computation.
//! Rational radicands never reach this layer: RT of a rational is rewritten
//! into the cyclotomic field itself (Gauss sums), so the radical slot is only
//! occupied by genuinely non-cyclotomic square roots.

use super::{CycloError, CycloNum, Rat};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    base: CycloNum,
    rad: Option<RadPart>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct RadPart {
    coeff: CycloNum,
    radicand: CycloNum,
}

impl From<CycloNum> for FieldElem {
    fn from(base: CycloNum) -> Self {
        FieldElem { base, rad: None }
    }
}

impl From<Rat> for FieldElem {
    fn from(q: Rat) -> Self {
        CycloNum::from_rational(q).into()
    }
}

impl From<i64> for FieldElem {
    fn from(k: i64) -> Self {
        CycloNum::from_int(k).into()
    }
}

impl FieldElem {
    pub fn zero() -> Self {
        CycloNum::zero().into()
    }

    pub fn one() -> Self {
        CycloNum::one().into()
    }

    pub fn root_of_unity(n: u64, k: i64) -> Self {
        CycloNum::root_of_unity(n, k).into()
    }

    fn make(base: CycloNum, coeff: CycloNum, radicand: CycloNum) -> Self {
        if coeff.is_zero() {
            FieldElem { base, rad: None }
        } else {
            FieldElem { base, rad: Some(RadPart { coeff, radicand }) }
        }
    }

    /// Exact square root, as used by the RT() syntax. Rational arguments
    /// become plain cyclotomic numbers; non-rational cyclotomic arguments
    /// open the (single) radical slot; radical arguments are rejected.
    pub fn sqrt(x: &FieldElem) -> Result<Self, CycloError> {
        if let Some(r) = &x.rad {
            if !r.coeff.is_zero() {
                return Err(CycloError::NestedRadical(x.to_string()));
            }
        }
        if let Some(q) = x.base.as_rational() {
            return Ok(CycloNum::sqrt_rational(&q)?.into());
        }
        Ok(Self::make(CycloNum::zero(), CycloNum::one(), x.base.clone()))
    }

    pub fn base(&self) -> &CycloNum {
        &self.base
    }

    /// (coefficient, radicand) when the radical slot is occupied.
    pub fn radical_part(&self) -> Option<(&CycloNum, &CycloNum)> {
        self.rad.as_ref().map(|r| (&r.coeff, &r.radicand))
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.rad.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.base.is_one() && self.rad.is_none()
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_none() && self.base.is_rational()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.rad.is_some() {
            return None;
        }
        self.base.as_rational()
    }

    /// The underlying cyclotomic number when no radical is present.
    pub fn as_cyclo(&self) -> Option<&CycloNum> {
        if self.rad.is_some() {
            None
        } else {
            Some(&self.base)
        }
    }

    /// Least common conductor over every cyclotomic component.
    pub fn conductor(&self) -> u64 {
        let mut n = self.base.conductor();
        if let Some(r) = &self.rad {
            n = super::nt::lcm(n, r.coeff.conductor());
            n = super::nt::lcm(n, r.radicand.conductor());
        }
        n
    }

    fn unify_radicand<'a>(
        &'a self,
        rhs: &'a FieldElem,
    ) -> Result<Option<&'a CycloNum>, CycloError> {
        match (&self.rad, &rhs.rad) {
            (None, None) => Ok(None),
            (Some(r), None) => Ok(Some(&r.radicand)),
            (None, Some(r)) => Ok(Some(&r.radicand)),
            (Some(a), Some(b)) => {
                if a.radicand == b.radicand {
                    Ok(Some(&a.radicand))
                } else {
                    Err(CycloError::IncompatibleRadicands(
                        a.radicand.to_string(),
                        b.radicand.to_string(),
                    ))
                }
            }
        }
    }

    fn coeff_of_rad(&self) -> CycloNum {
        self.rad.as_ref().map(|r| r.coeff.clone()).unwrap_or_else(CycloNum::zero)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, CycloError> {
        let delta = self.unify_radicand(rhs)?.cloned();
        let base = &self.base + &rhs.base;
        let coeff = &self.coeff_of_rad() + &rhs.coeff_of_rad();
        Ok(match delta {
            Some(d) => Self::make(base, coeff, d),
            None => base.into(),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, CycloError> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, CycloError> {
        let delta = self.unify_radicand(rhs)?.cloned();
        let (a, b) = (&self.base, self.coeff_of_rad());
        let (c, d) = (&rhs.base, rhs.coeff_of_rad());
        Ok(match delta {
            Some(dl) => {
                let base = &(a * c) + &(&(&b * &d) * &dl);
                let coeff = &(a * &d) + &(&b * c);
                Self::make(base, coeff, dl)
            }
            None => (a * c).into(),
        })
    }

    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        match &self.rad {
            None => Ok(self.base.inv()?.into()),
            Some(r) => {
                // 1/(a+bt) = (a-bt)/(a^2 - b^2 delta)
                let den = &(&self.base * &self.base)
                    - &(&(&r.coeff * &r.coeff) * &r.radicand);
                if den.is_zero() {
                    return Err(CycloError::UnsupportedRadicand(r.radicand.to_string()));
                }
                let di = den.inv()?;
                Ok(Self::make(
                    &self.base * &di,
                    -&(&r.coeff * &di),
                    r.radicand.clone(),
                ))
            }
        }
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, CycloError> {
        self.try_mul(&rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut cur = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&cur)?;
            }
            cur = cur.try_mul(&cur)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

// Unchecked operators for code paths that guarantee one shared radicand
// (polynomials, matrices); a panic here is an internal invariant violation,
// not a user-input error. User input goes through the try_* methods.
macro_rules! forward_field_binop {
    ($trait:ident, $fn:ident, $try_fn:ident) => {
        impl std::ops::$trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $fn(self, rhs: &FieldElem) -> FieldElem {
                self.$try_fn(rhs).expect("radicand mismatch in internal arithmetic")
            }
        }
        impl std::ops::$trait for FieldElem {
            type Output = FieldElem;
            fn $fn(self, rhs: FieldElem) -> FieldElem {
                (&self).$fn(&rhs)
            }
        }
    };
}

forward_field_binop!(Add, add, try_add);
forward_field_binop!(Sub, sub, try_sub);
forward_field_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            base: -&self.base,
            rad: self.rad.as_ref().map(|r| RadPart {
                coeff: -&r.coeff,
                radicand: r.radicand.clone(),
            }),
        }
    }
}

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rad {
            None => write!(f, "{}", self.base),
            Some(r) => {
                let rt = if r.coeff.is_one() {
                    format!("RT({})", r.radicand)
                } else {
                    format!("({})*RT({})", r.coeff, r.radicand)
                };
                if self.base.is_zero() {
                    write!(f, "{rt}")
                } else {
                    write!(f, "({}) + {rt}", self.base)
                }
            }
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    fn golden_radicand() -> CycloNum {
        // b - 3 with b the golden ratio (1+sqrt 5)/2; non-rational, so RT
        // keeps it as a radical.
        let sqrt5 = CycloNum::sqrt_rational(&rat_int(5)).unwrap();
        let b = &(&sqrt5 + &CycloNum::one()) * &CycloNum::from_rational(rat(1, 2));
        &b - &CycloNum::from_int(3)
    }

    #[test]
    fn sqrt_dispatch() {
        // rational radicand collapses to a cyclotomic number
        let two: FieldElem = rat_int(2).into();
        let r = FieldElem::sqrt(&two).unwrap();
        assert!(r.as_cyclo().is_some());
        assert_eq!(r.try_mul(&r).unwrap(), two);
        // non-rational radicand opens the radical slot
        let delta: FieldElem = golden_radicand().into();
        let t = FieldElem::sqrt(&delta).unwrap();
        assert!(t.radical_part().is_some());
        assert_eq!(t.try_mul(&t).unwrap(), delta);
        // nesting is rejected
        assert!(matches!(FieldElem::sqrt(&t), Err(CycloError::NestedRadical(_))));
    }

    #[test]
    fn radical_arithmetic() {
        let delta = golden_radicand();
        let t = FieldElem::sqrt(&delta.clone().into()).unwrap();
        let x = FieldElem::from(2).try_add(&t).unwrap(); // 2 + t
        let y = FieldElem::from(1).try_sub(&t).unwrap(); // 1 - t
        let prod = x.try_mul(&y).unwrap(); // 2 - t - t^2 = (2 - delta) - t
        let expect = FieldElem::make(
            &CycloNum::from_int(2) - &delta,
            CycloNum::from_int(-1),
            delta.clone(),
        );
        assert_eq!(prod, expect);
        // inverse
        let xi = x.inv().unwrap();
        assert!(x.try_mul(&xi).unwrap().is_one());
        // division by zero
        assert_eq!(FieldElem::zero().inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn incompatible_radicands() {
        let d1 = golden_radicand();
        let d2 = &golden_radicand() + &CycloNum::one();
        let t1 = FieldElem::sqrt(&d1.into()).unwrap();
        let t2 = FieldElem::sqrt(&d2.into()).unwrap();
        assert!(matches!(t1.try_add(&t2), Err(CycloError::IncompatibleRadicands(_, _))));
        assert!(matches!(t1.try_mul(&t2), Err(CycloError::IncompatibleRadicands(_, _))));
    }

    #[test]
    fn degenerate_division() {
        // delta is a square inside Q(zeta_5): (zeta_5^2-zeta_5^3)^2 = b-3,
        // so t - (zeta_5^2 - zeta_5^3) is a zero divisor and inversion
        // must refuse rather than divide by zero.
        let delta = golden_radicand();
        let s = &CycloNum::root_of_unity(5, 2) - &CycloNum::root_of_unity(5, 3);
        let t = FieldElem::sqrt(&delta.into()).unwrap();
        let z = t.try_sub(&s.into()).unwrap();
        assert!(matches!(z.inv(), Err(CycloError::UnsupportedRadicand(_))));
    }

    #[test]
    fn display_round_shapes() {
        let delta = golden_radicand();
        let t = FieldElem::sqrt(&delta.clone().into()).unwrap();
        assert_eq!(t.to_string(), format!("RT({delta})"));
        let u = FieldElem::from(3).try_add(&t).unwrap();
        assert_eq!(u.to_string(), format!("(3) + RT({delta})"));
    }
}
