//! Homomorphic reduction of cyclotomic values into prime fields F_p.
//!
//! For p = 1 mod n and z of multiplicative order n in F_p, the map
//! zeta_n -> z extends to a ring homomorphism on every cyclotomic number
//! whose coefficient denominators avoid p. A nonzero image therefore
//! certifies a nonzero exact value, which is what the smoothness module
//! leans on.

use super::nt;
use super::{CycloError, CycloNum, FieldElem};
use num::ToPrimitive;

/// Direct reduction at the value's own conductor, as specified: requires
/// p = 1 mod conductor and zeta_image of exactly that order.
pub fn reduce_mod_prime(x: &CycloNum, p: u64, zeta_image: u64) -> Result<u64, CycloError> {
    let n = x.conductor();
    if !nt::is_prime(p) || (p - 1) % n != 0 {
        return Err(CycloError::BadPrime { p, conductor: n });
    }
    if n > 1 && nt::mult_order_mod(zeta_image, p) != Some(n) {
        return Err(CycloError::BadRootImage { image: zeta_image, expected: n, p });
    }
    eval_terms(x, p, zeta_image % p)
}

fn eval_terms(x: &CycloNum, p: u64, z: u64) -> Result<u64, CycloError> {
    let pb = num::BigInt::from(p);
    let mut acc = 0u64;
    for (k, c) in x.terms() {
        let den = (c.denom() % &pb).to_u64().unwrap();
        let den_inv = nt::mod_inv(den, p).ok_or(CycloError::DenominatorClash { p })?;
        let num = ((c.numer() % &pb) + &pb).to_u64().unwrap() % p;
        let coeff = (num as u128 * den_inv as u128 % p as u128) as u64;
        let term = coeff as u128 * nt::mod_pow(z, k, p) as u128 % p as u128;
        acc = ((acc as u128 + term) % p as u128) as u64;
    }
    Ok(acc)
}

/// A fixed reduction context: prime p, a root order n covering every
/// conductor in play, a chosen image of zeta_n, and optionally the image of
/// one quadratic radical.
#[derive(Clone, Debug)]
pub struct ModContext {
    pub p: u64,
    pub n: u64,
    zeta: u64,
    rad: Option<(CycloNum, u64)>,
}

impl ModContext {
    /// Picks an element of exact order n in F_p; fails when p is not prime
    /// or p != 1 mod n.
    pub fn new(p: u64, n: u64) -> Result<Self, CycloError> {
        if !nt::is_prime(p) || (p - 1) % n != 0 {
            return Err(CycloError::BadPrime { p, conductor: n });
        }
        if n == 1 {
            return Ok(ModContext { p, n, zeta: 1, rad: None });
        }
        for g in 2..p {
            let z = nt::mod_pow(g, (p - 1) / n, p);
            if nt::mult_order_mod(z, p) == Some(n) {
                return Ok(ModContext { p, n, zeta: z, rad: None });
            }
        }
        Err(CycloError::BadPrime { p, conductor: n })
    }

    /// Fixes the image of a radical t with t^2 = delta; requires delta's
    /// image to be a quadratic residue.
    pub fn with_radical(mut self, delta: &CycloNum) -> Result<Self, CycloError> {
        let d = self.reduce(delta)?;
        let root = nt::sqrt_mod(d, self.p).ok_or(CycloError::NonResidue { p: self.p })?;
        self.rad = Some((delta.clone(), root));
        Ok(self)
    }

    pub fn reduce(&self, x: &CycloNum) -> Result<u64, CycloError> {
        let c = x.conductor();
        assert_eq!(self.n % c, 0, "context order {} does not cover conductor {c}", self.n);
        eval_terms(x, self.p, nt::mod_pow(self.zeta, self.n / c, self.p))
    }

    pub fn reduce_field(&self, x: &FieldElem) -> Result<u64, CycloError> {
        let base = self.reduce(x.base())?;
        let Some((coeff, radicand)) = x.radical_part() else {
            return Ok(base);
        };
        let (delta, root) = self
            .rad
            .as_ref()
            .ok_or_else(|| CycloError::UnsupportedRadicand(radicand.to_string()))?;
        if delta != radicand {
            return Err(CycloError::IncompatibleRadicands(
                delta.to_string(),
                radicand.to_string(),
            ));
        }
        let c = self.reduce(coeff)?;
        Ok(((base as u128 + c as u128 * *root as u128) % self.p as u128) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int, Rat};
    use super::*;

    fn e(n: u64, k: i64) -> CycloNum {
        CycloNum::root_of_unity(n, k)
    }

    #[test]
    fn rational_reduction() {
        let x = CycloNum::from_rational(rat(7, 2));
        assert_eq!(reduce_mod_prime(&x, 5, 0), Ok(1));
        assert_eq!(
            reduce_mod_prime(&CycloNum::from_rational(rat(1, 7)), 7, 0),
            Err(CycloError::DenominatorClash { p: 7 })
        );
    }

    #[test]
    fn root_reduction() {
        assert_eq!(reduce_mod_prime(&e(3, 1), 7, 2), Ok(2));
        assert_eq!(nt::mod_pow(2, 3, 7), 1);
        // zeta_3 + zeta_3^2 = -1 on the nose and mod p
        assert_eq!(reduce_mod_prime(&(&e(3, 1) + &e(3, 2)), 7, 2), Ok(6));
        assert_eq!(
            reduce_mod_prime(&e(3, 1), 5, 2),
            Err(CycloError::BadPrime { p: 5, conductor: 3 })
        );
        assert_eq!(
            reduce_mod_prime(&e(3, 1), 7, 3),
            Err(CycloError::BadRootImage { image: 3, expected: 3, p: 7 })
        );
    }

    #[test]
    fn context_homomorphism_spot_checks() {
        let ctx = ModContext::new(31, 15).unwrap();
        let a = &e(5, 2) + &CycloNum::from_rational(rat(1, 3));
        let b = &e(3, 1) - &CycloNum::from_int(4);
        let ra = ctx.reduce(&a).unwrap();
        let rb = ctx.reduce(&b).unwrap();
        assert_eq!(ctx.reduce(&(&a * &b)).unwrap(), (ra as u128 * rb as u128 % 31) as u64);
        assert_eq!(ctx.reduce(&(&a + &b)).unwrap(), (ra + rb) % 31);
    }

    #[test]
    fn radical_reduction() {
        // sqrt(5) is cyclotomic, but treat b-3 as a radical over Q(zeta_5)
        let sqrt5 = CycloNum::sqrt_rational(&rat_int(5)).unwrap();
        let b = &(&sqrt5 + &CycloNum::one()) * &CycloNum::from_rational(rat(1, 2));
        let delta = &b - &CycloNum::from_int(3);
        let t = FieldElem::sqrt(&delta.clone().into()).unwrap();
        let x = FieldElem::from(1).try_add(&t).unwrap();
        // p = 11: 11 = 1 mod 5
        let ctx = ModContext::new(11, 5).unwrap().with_radical(&delta).unwrap();
        let rx = ctx.reduce_field(&x).unwrap();
        let rt = ctx.reduce_field(&t).unwrap();
        assert_eq!(rx, (1 + rt) % 11);
        // t^2 image equals delta image
        let rd = ctx.reduce(&delta).unwrap();
        assert_eq!((rt as u128 * rt as u128 % 11) as u64, rd);
    }

    #[test]
    fn proptest_scale_homomorphism() {
        // light randomized pass here; the heavier randomized suite lives in
        // the integration tests
        let ctx = ModContext::new(61, 15).unwrap();
        let vals: Vec<CycloNum> = (0..10)
            .map(|i| {
                &e(15, i) + &CycloNum::from_rational(Rat::new((i as i64 - 4).into(), (i + 1).into()))
            })
            .collect();
        for a in &vals {
            for b in &vals {
                let ra = ctx.reduce(a).unwrap();
                let rb = ctx.reduce(b).unwrap();
                assert_eq!(
                    ctx.reduce(&(a * b)).unwrap(),
                    (ra as u128 * rb as u128 % 61) as u64
                );
                assert_eq!(ctx.reduce(&(a + b)).unwrap(), (ra + rb) % 61);
            }
        }
    }
}
