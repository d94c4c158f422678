//! Polynomials in t⁻¹ over F_q, i.e. elements of F⁻ = F_q[t⁻¹].
//!
//! `coeffs[i]` is the coefficient of t^(-i). The zero polynomial has no
//! coefficients, so `deg_minus` returns `None` for it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField, GaloisElement};

mod factor;
mod ratf;

pub use factor::{
    distinct_degree, equal_degree, factorize, factorize_with_rng, is_q_separable,
    max_eth_power_divisor_degree, q_separable_split, squarefree, Factorization,
};
pub use ratf::RatF;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pol {
    coeffs: Vec<FqElem>,
}

impl Pol {
    pub fn zero() -> Self {
        Pol { coeffs: Vec::new() }
    }
    pub fn one() -> Self {
        Pol { coeffs: vec![FqElem::ONE] }
    }
    pub fn constant(c: FqElem) -> Self {
        Pol::from_coeffs(vec![c])
    }
    /// c·t^(-n)
    pub fn monomial(c: FqElem, n: usize) -> Self {
        if c.is_zero() {
            return Pol::zero();
        }
        let mut coeffs = vec![FqElem::ZERO; n + 1];
        coeffs[n] = c;
        Pol { coeffs }
    }
    /// t^(-n)
    pub fn t_inv_pow(n: usize) -> Self {
        Pol::monomial(FqElem::ONE, n)
    }

    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Pol { coeffs }
    }

    /// Builds from prime-field integers, low degree first.
    pub fn from_ints(f: &FqField, c: &[i64]) -> Self {
        Pol::from_coeffs(c.iter().map(|&x| f.from_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }
    /// Nonzero constant, or zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
    pub fn deg_minus(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    /// Number of coefficient slots, deg⁻ + 1 (0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem::ONE
    }
    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn add(&self, o: &Pol, f: &FqField) -> Pol {
        let n = self.len().max(o.len());
        Pol::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Pol, f: &FqField) -> Pol {
        let n = self.len().max(o.len());
        Pol::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self, f: &FqField) -> Pol {
        Pol { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
    pub fn scale(&self, c: FqElem, f: &FqField) -> Pol {
        Pol::from_coeffs(self.coeffs.iter().map(|&x| f.mul(c, x)).collect())
    }
    /// Multiplies by t^(-n).
    pub fn shift(&self, n: usize) -> Pol {
        if self.is_zero() {
            return Pol::zero();
        }
        let mut coeffs = vec![FqElem::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Pol { coeffs }
    }

    pub fn mul(&self, o: &Pol, f: &FqField) -> Pol {
        if self.is_zero() || o.is_zero() {
            return Pol::zero();
        }
        let mut r = vec![FqElem::ZERO; self.len() + o.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        Pol::from_coeffs(r)
    }

    pub fn pow(&self, mut n: u64, f: &FqField) -> Pol {
        let mut base = self.clone();
        let mut acc = Pol::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// a^(p^k), computed coefficientwise since Frobenius is additive.
    pub fn pow_p_power(&self, pk: u64, f: &FqField) -> Pol {
        if self.is_zero() {
            return Pol::zero();
        }
        let pk_usize = pk as usize;
        let mut coeffs = vec![FqElem::ZERO; (self.len() - 1) * pk_usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * pk_usize] = f.pow(c, pk);
        }
        Pol::from_coeffs(coeffs)
    }

    /// Division with remainder in F_q[t⁻¹].
    pub fn divrem(&self, m: &Pol, f: &FqField) -> Result<(Pol, Pol)> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dm = m.len() - 1;
        let li = f.inv(m.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            return Ok((Pol::zero(), Pol::from_coeffs(r)));
        }
        let mut quo = vec![FqElem::ZERO; r.len() - dm];
        for top in (dm..r.len()).rev() {
            let c = f.mul(r[top], li);
            if c.is_zero() {
                continue;
            }
            quo[top - dm] = c;
            for (i, &mi) in m.coeffs.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = f.sub(r[idx], f.mul(c, mi));
            }
        }
        r.truncate(dm);
        Ok((Pol::from_coeffs(quo), Pol::from_coeffs(r)))
    }

    pub fn rem(&self, m: &Pol, f: &FqField) -> Result<Pol> {
        Ok(self.divrem(m, f)?.1)
    }

    /// Exact quotient; errors if `m` does not divide.
    pub fn div_exact(&self, m: &Pol, f: &FqField) -> Result<Pol> {
        let (q, r) = self.divrem(m, f)?;
        if !r.is_zero() {
            return Err(Error::Domain("division is not exact".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, a: &Pol, f: &FqField) -> bool {
        !self.is_zero() && a.rem(self, f).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self, f: &FqField) -> Pol {
        if self.is_zero() {
            return Pol::zero();
        }
        self.scale(f.inv(self.lead()).unwrap(), f)
    }

    /// Formal derivative with respect to t⁻¹.
    pub fn derivative(&self, f: &FqField) -> Pol {
        Pol::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.scalar((i as u64 % f.p() as u64) as u32, c))
                .collect(),
        )
    }

    /// The p-th root of a polynomial supported on exponents divisible by p.
    pub fn pth_root(&self, f: &FqField) -> Result<Pol> {
        let p = f.p() as usize;
        if self.support().any(|i| i % p != 0) {
            return Err(Error::Domain("support not contained in pZ".into()));
        }
        Ok(Pol::from_coeffs(
            self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect(),
        ))
    }

    pub fn eval(&self, x: FqElem, f: &FqField) -> FqElem {
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Applies a field automorphism to every coefficient.
    pub fn map_galois(&self, g: GaloisElement, f: &FqField) -> Pol {
        Pol { coeffs: self.coeffs.iter().map(|&c| f.apply_galois(g, c)).collect() }
    }

    pub fn mulmod(&self, o: &Pol, m: &Pol, f: &FqField) -> Pol {
        self.mul(o, f).rem(m, f).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut n: u64, m: &Pol, f: &FqField) -> Pol {
        let mut base = self.rem(m, f).expect("nonzero modulus");
        let mut acc = Pol::one().rem(m, f).expect("nonzero modulus");
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mulmod(&base, m, f);
            }
            n >>= 1;
            if n > 0 {
                base = base.mulmod(&base, m, f);
            }
        }
        acc
    }
}

/// Monic gcd. Errors when both inputs are zero.
pub fn poly_gcd(a: &Pol, b: &Pol, f: &FqField) -> Result<Pol> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("gcd(0, 0) is undefined".into()));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y, f)?;
        x = std::mem::replace(&mut y, r);
    }
    Ok(x.monic(f))
}

/// Returns (g, s, u) with s·a + u·b = g = gcd(a, b) monic.
pub fn poly_xgcd(a: &Pol, b: &Pol, f: &FqField) -> Result<(Pol, Pol, Pol)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("gcd(0, 0) is undefined".into()));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Pol::one(), Pol::zero());
    let (mut u0, mut u1) = (Pol::zero(), Pol::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1, f)?;
        let s2 = s0.sub(&q.mul(&s1, f), f);
        let u2 = u0.sub(&q.mul(&u1, f), f);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        u0 = std::mem::replace(&mut u1, u2);
    }
    let li = f.inv(r0.lead())?;
    Ok((r0.scale(li, f), s0.scale(li, f), u0.scale(li, f)))
}

/// τ(f(t⁻¹)) = σ(f(α t⁻¹ + β)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldAut {
    pub sigma: GaloisElement,
    pub alpha: FqElem,
    pub beta: FqElem,
}

impl FieldAut {
    pub fn new(sigma: GaloisElement, alpha: FqElem, beta: FqElem) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::Parameter("alpha must be nonzero".into()));
        }
        Ok(FieldAut { sigma, alpha, beta })
    }

    pub fn identity() -> Self {
        FieldAut { sigma: GaloisElement { power: 0 }, alpha: FqElem::ONE, beta: FqElem::ZERO }
    }

    /// The automorphism "apply `self`, then `then`".
    pub fn then(&self, then: &FieldAut, f: &FqField) -> FieldAut {
        let s1_inv = f.galois_inverse(self.sigma);
        FieldAut {
            sigma: f.galois_compose(then.sigma, self.sigma),
            alpha: f.mul(self.alpha, f.apply_galois(s1_inv, then.alpha)),
            beta: f.add(f.mul(self.alpha, f.apply_galois(s1_inv, then.beta)), self.beta),
        }
    }

    pub fn inverse(&self, f: &FqField) -> FieldAut {
        let ai = f.inv(self.alpha).expect("alpha nonzero");
        FieldAut {
            sigma: f.galois_inverse(self.sigma),
            alpha: f.apply_galois(self.sigma, ai),
            beta: f.apply_galois(self.sigma, f.neg(f.mul(self.beta, ai))),
        }
    }

    pub fn apply_scalar(&self, c: FqElem, f: &FqField) -> FqElem {
        f.apply_galois(self.sigma, c)
    }

    pub fn apply(&self, p: &Pol, f: &FqField) -> Pol {
        substitute_affine(p, self, f)
    }
}

pub fn substitute_affine(p: &Pol, tau: &FieldAut, f: &FqField) -> Pol {
    let lin = Pol::from_coeffs(vec![tau.beta, tau.alpha]);
    let mut acc = Pol::zero();
    for &c in p.coeffs().iter().rev() {
        acc = acc.mul(&lin, f).add(&Pol::constant(c), f);
    }
    acc.map_galois(tau.sigma, f)
}

/// True iff a/b is an e-th power in F = F_q((t)), for e a power of p.
pub fn eth_power_ratio_test(a: &Pol, b: &Pol, e: u64, f: &FqField) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("eth_power_ratio_test needs nonzero inputs".into()));
    }
    check_p_power(e, f)?;
    let x = a.mul(&b.pow(e - 1, f), f);
    let ok = x.support().all(|i| (i as u64).is_multiple_of(e));
    Ok(ok)
}

/// True iff a/b lies in F_q, i.e. a and b are proportional.
pub fn ratio_in_fq(a: &Pol, b: &Pol, f: &FqField) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    a.len() == b.len() && a.scale(b.lead(), f) == b.scale(a.lead(), f)
}

/// Checks that n > 1 is a power of p.
pub fn check_p_power(n: u64, f: &FqField) -> Result<()> {
    let p = f.p() as u64;
    let mut m = n;
    if m <= 1 {
        return Err(Error::Parameter(format!("{n} is not a power of p = {p} greater than 1")));
    }
    while m.is_multiple_of(p) {
        m /= p;
    }
    if m != 1 {
        return Err(Error::Parameter(format!("{n} is not a power of p = {p}")));
    }
    Ok(())
}
