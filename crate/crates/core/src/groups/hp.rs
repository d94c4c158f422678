use serde::{Deserialize, Serialize};

use super::heis::{Heis, HeisElem};
use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField};
use crate::poly::{Pol, RatF};

/// (x, y, z) ↔ the (m+2)×(m+2) matrix with top row (1, x₁ᵖ, …, x_mᵖ, z)
/// and last column (z, y₁ᵖ, …, y_mᵖ, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HpElem {
    pub x: Vec<RatF>,
    pub y: Vec<RatF>,
    pub z: RatF,
}

impl HpElem {
    pub fn central(z: RatF, m: usize) -> Self {
        HpElem { x: vec![RatF::zero(); m], y: vec![RatF::zero(); m], z }
    }
    pub fn is_central(&self) -> bool {
        self.x.iter().chain(&self.y).all(RatF::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hp {
    m: usize,
    fld: FqField,
}

/// Splits a polynomial by exponent class: (exponents ≡ 0 mod p, the rest).
fn split_pol(a: &Pol, p: usize) -> (Pol, Pol) {
    let mut z0 = vec![FqElem::ZERO; a.len()];
    let mut za = vec![FqElem::ZERO; a.len()];
    for (i, &c) in a.coeffs().iter().enumerate() {
        if i % p == 0 {
            z0[i] = c;
        } else {
            za[i] = c;
        }
    }
    (Pol::from_coeffs(z0), Pol::from_coeffs(za))
}

/// z = z₀ + z_A with z₀ ∈ Fᵖ and z_A = N_A/dᵖ, where z = N/dᵖ and N_A is the
/// part of N on exponents ≢ 0 mod p.
pub fn split_pth_class(z: &RatF, f: &FqField) -> (RatF, RatF) {
    let p = f.p() as usize;
    let dp1 = z.den().pow(p as u64 - 1, f);
    let n = z.num().mul(&dp1, f);
    let dp = dp1.mul(z.den(), f);
    let (n0, na) = split_pol(&n, p);
    (RatF::new(n0, dp.clone(), f).unwrap(), RatF::new(na, dp, f).unwrap())
}

impl Hp {
    pub fn new(m: usize, fld: &FqField) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        Ok(Hp { m, fld: fld.clone() })
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn fld(&self) -> &FqField {
        &self.fld
    }
    pub fn identity(&self) -> HpElem {
        HpElem::central(RatF::zero(), self.m)
    }

    fn check(&self, g: &HpElem) -> Result<()> {
        if g.x.len() != self.m || g.y.len() != self.m {
            return Err(Error::Parameter(format!("expected m = {} coordinates", self.m)));
        }
        Ok(())
    }

    /// z-coordinate gains Σ x₁ᵢᵖ y₂ᵢᵖ.
    pub fn mul(&self, g: &HpElem, h: &HpElem) -> Result<HpElem> {
        self.check(g)?;
        self.check(h)?;
        let f = &self.fld;
        let p = f.p() as u64;
        let cross = g.x.iter().zip(&h.y).fold(RatF::zero(), |acc, (a, b)| {
            acc.add(&a.mul(b, f).pow_p_power(p, f), f)
        });
        Ok(HpElem {
            x: g.x.iter().zip(&h.x).map(|(a, b)| a.add(b, f)).collect(),
            y: g.y.iter().zip(&h.y).map(|(a, b)| a.add(b, f)).collect(),
            z: g.z.add(&h.z, f).add(&cross, f),
        })
    }

    pub fn inv(&self, g: &HpElem) -> Result<HpElem> {
        self.check(g)?;
        let f = &self.fld;
        let p = f.p() as u64;
        let xy = g.x.iter().zip(&g.y).fold(RatF::zero(), |acc, (a, b)| acc.add(&a.mul(b, f).pow_p_power(p, f), f));
        Ok(HpElem {
            x: g.x.iter().map(|a| a.neg(f)).collect(),
            y: g.y.iter().map(|a| a.neg(f)).collect(),
            z: xy.sub(&g.z, f),
        })
    }

    pub fn commutator(&self, g: &HpElem, h: &HpElem) -> Result<HpElem> {
        let gh = self.mul(g, h)?;
        let rest = self.mul(&self.inv(g)?, &self.inv(h)?)?;
        self.mul(&gh, &rest)
    }

    /// g = g′·a with g′ ∈ H′_p (z a p-th power) and a central with z supported
    /// off pℤ.
    pub fn decompose(&self, g: &HpElem) -> Result<(HpElem, HpElem)> {
        self.check(g)?;
        let (z0, za) = split_pth_class(&g.z, &self.fld);
        Ok((HpElem { x: g.x.clone(), y: g.y.clone(), z: z0 }, HpElem::central(za, self.m)))
    }

    pub fn in_h_prime(&self, g: &HpElem) -> bool {
        split_pth_class(&g.z, &self.fld).1.is_zero()
    }

    pub fn in_a(&self, g: &HpElem) -> bool {
        g.is_central() && split_pth_class(&g.z, &self.fld).0.is_zero()
    }

    /// The isomorphism H → H′_p: (x, y, z) in the matrix picture of H goes to
    /// (x, y, zᵖ). The symplectic picture (v, z) maps to the matrix picture
    /// by x = v_a, y = 2v_b, z + v_a·v_b.
    pub fn frobenius_transport(&self, heis: &Heis, g: &HeisElem) -> Result<HpElem> {
        if heis.m() != self.m || g.v.len() != 2 * self.m {
            return Err(Error::Parameter("Heisenberg and H_p dimensions differ".into()));
        }
        let f = &self.fld;
        let m = self.m;
        let two = f.from_int(2);
        let (va, vb) = g.v.split_at(m);
        let dot = va.iter().zip(vb).fold(RatF::zero(), |acc, (a, b)| acc.add(&a.mul(b, f), f));
        Ok(HpElem {
            x: va.to_vec(),
            y: vb.iter().map(|b| b.scale(two, f)).collect(),
            z: g.z.add(&dot, f).pow_p_power(f.p() as u64, f),
        })
    }

    /// Inverse of `frobenius_transport`; errors outside H′_p.
    pub fn frobenius_untransport(&self, heis: &Heis, g: &HpElem) -> Result<HeisElem> {
        self.check(g)?;
        if heis.m() != self.m {
            return Err(Error::Parameter("Heisenberg and H_p dimensions differ".into()));
        }
        let f = &self.fld;
        let half = f.inv(f.from_int(2))?;
        let root = g
            .z
            .pth_root(f)
            .map_err(|_| Error::Domain("z is not a p-th power, element lies outside H'_p".into()))?;
        let vb: Vec<RatF> = g.y.iter().map(|b| b.scale(half, f)).collect();
        let dot = g.x.iter().zip(&vb).fold(RatF::zero(), |acc, (a, b)| acc.add(&a.mul(b, f), f));
        let mut v = g.x.clone();
        v.extend(vb);
        Ok(HeisElem { v, z: root.sub(&dot, f) })
    }
}
