//! Exact fractions num/den of elements of F⁻, kept reduced with monic denominator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField};
use super::{poly_gcd, FieldAut, Pol};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatF {
    num: Pol,
    den: Pol,
}

impl RatF {
    pub fn new(num: Pol, den: Pol, f: &FqField) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatF::zero());
        }
        let g = poly_gcd(&num, &den, f)?;
        let (num, den) = (num.div_exact(&g, f)?, den.div_exact(&g, f)?);
        let li = f.inv(den.lead())?;
        Ok(RatF { num: num.scale(li, f), den: den.scale(li, f) })
    }

    pub fn zero() -> Self {
        RatF { num: Pol::zero(), den: Pol::one() }
    }
    pub fn one() -> Self {
        RatF { num: Pol::one(), den: Pol::one() }
    }
    pub fn from_pol(p: Pol) -> Self {
        RatF { num: p, den: Pol::one() }
    }
    pub fn constant(c: FqElem) -> Self {
        RatF::from_pol(Pol::constant(c))
    }

    pub fn num(&self) -> &Pol {
        &self.num
    }
    pub fn den(&self) -> &Pol {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    /// True when the fraction lies in F⁻.
    pub fn is_pol(&self) -> bool {
        self.den.is_one()
    }
    pub fn as_pol(&self) -> Option<&Pol> {
        self.is_pol().then_some(&self.num)
    }

    pub fn add(&self, o: &RatF, f: &FqField) -> RatF {
        if self.den == o.den {
            return RatF::new(self.num.add(&o.num, f), self.den.clone(), f).unwrap();
        }
        let num = self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f);
        RatF::new(num, self.den.mul(&o.den, f), f).unwrap()
    }
    pub fn neg(&self, f: &FqField) -> RatF {
        RatF { num: self.num.neg(f), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatF, f: &FqField) -> RatF {
        self.add(&o.neg(f), f)
    }
    pub fn mul(&self, o: &RatF, f: &FqField) -> RatF {
        if self.den.is_one() && o.den.is_one() {
            return RatF::from_pol(self.num.mul(&o.num, f));
        }
        RatF::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f).unwrap()
    }
    pub fn scale(&self, c: FqElem, f: &FqField) -> RatF {
        RatF { num: self.num.scale(c, f), den: if c.is_zero() { Pol::one() } else { self.den.clone() } }
    }
    pub fn inv(&self, f: &FqField) -> Result<RatF> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatF::new(self.den.clone(), self.num.clone(), f)
    }
    pub fn div(&self, o: &RatF, f: &FqField) -> Result<RatF> {
        Ok(self.mul(&o.inv(f)?, f))
    }
    pub fn pow(&self, n: u64, f: &FqField) -> RatF {
        RatF { num: self.num.pow(n, f), den: self.den.pow(n, f) }
    }
    /// Applies the ring automorphism τ of F_q(t) to numerator and denominator.
    pub fn apply_aut(&self, tau: &FieldAut, f: &FqField) -> RatF {
        RatF::new(tau.apply(&self.num, f), tau.apply(&self.den, f), f).unwrap()
    }
    /// The unique p-th root; errors when the fraction is not a p-th power.
    pub fn pth_root(&self, f: &FqField) -> Result<RatF> {
        Ok(RatF { num: self.num.pth_root(f)?, den: self.den.pth_root(f)? })
    }
    /// The e-th power map for e a power of p.
    pub fn pow_p_power(&self, e: u64, f: &FqField) -> RatF {
        RatF { num: self.num.pow_p_power(e, f), den: self.den.pow_p_power(e, f) }
    }
}
