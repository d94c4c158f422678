//! The groups G₂, H (Heisenberg) and H_p over F = F_q((t)), their
//! standard automorphisms and arithmetic-lattice membership.
//!
//! Coordinates are exact fractions in F_q(t) ⊂ F.

use serde::{Deserialize, Serialize};

use crate::bracket::BracketForm;
use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::{FieldAut, Pol, RatF};

mod heis;
mod hp;
pub mod linalg;

pub use heis::*;
pub use hp::*;

/// (y, z) ↔ the matrix [[1, yᵉ, z], [0, 1, y], [0, 0, 1]].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct G2Elem {
    pub y: RatF,
    pub z: RatF,
}

impl G2Elem {
    pub fn new(y: RatF, z: RatF) -> Self {
        G2Elem { y, z }
    }
    pub fn from_pols(y: Pol, z: Pol) -> Self {
        G2Elem { y: RatF::from_pol(y), z: RatF::from_pol(z) }
    }
    pub fn identity() -> Self {
        G2Elem { y: RatF::zero(), z: RatF::zero() }
    }
    pub fn is_central(&self) -> bool {
        self.y.is_zero()
    }
    pub fn coords(&self) -> Vec<RatF> {
        vec![self.y.clone(), self.z.clone()]
    }
}

/// G₂ for a fixed exponent e and field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2 {
    form: BracketForm,
}

impl G2 {
    pub fn new(e: u64, fld: &FqField) -> Result<Self> {
        Ok(G2 { form: BracketForm::new(e, fld)? })
    }
    pub fn from_form(form: BracketForm) -> Self {
        G2 { form }
    }
    pub fn form(&self) -> &BracketForm {
        &self.form
    }
    pub fn e(&self) -> u64 {
        self.form.e()
    }
    pub fn fld(&self) -> &FqField {
        self.form.fld()
    }

    /// (y₁,z₁)(y₂,z₂) = (y₁+y₂, z₁+z₂+y₁ᵉy₂).
    pub fn mul(&self, g: &G2Elem, h: &G2Elem) -> G2Elem {
        let f = self.fld();
        let cross = g.y.pow_p_power(self.e(), f).mul(&h.y, f);
        G2Elem { y: g.y.add(&h.y, f), z: g.z.add(&h.z, f).add(&cross, f) }
    }

    pub fn inv(&self, g: &G2Elem) -> G2Elem {
        let f = self.fld();
        let ye1 = g.y.pow_p_power(self.e(), f).mul(&g.y, f);
        G2Elem { y: g.y.neg(f), z: ye1.sub(&g.z, f) }
    }

    /// g h g⁻¹ h⁻¹, which equals (0, ⟨y_g, y_h⟩).
    pub fn commutator(&self, g: &G2Elem, h: &G2Elem) -> G2Elem {
        let gh = self.mul(g, h);
        let gi_hi = self.mul(&self.inv(g), &self.inv(h));
        self.mul(&gh, &gi_hi)
    }
}

/// φ_{τ,a}(y, z) = (a·τ(y), a^(e+1)·τ(z)), with a certificate b ≠ 0 in F⁻
/// such that a·b ∈ F⁻.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardAutG2 {
    pub tau: FieldAut,
    pub a: RatF,
    pub certificate_b: Pol,
}

impl StandardAutG2 {
    pub fn new(tau: FieldAut, a: RatF, certificate_b: Pol, f: &FqField) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Parameter("a must be nonzero".into()));
        }
        if certificate_b.is_zero() || !a.mul(&RatF::from_pol(certificate_b.clone()), f).is_pol() {
            return Err(Error::Parameter("certificate b must be nonzero with a·b in F⁻".into()));
        }
        Ok(StandardAutG2 { tau, a, certificate_b })
    }

    /// Uses the denominator of a as certificate.
    pub fn with_default_certificate(tau: FieldAut, a: RatF, f: &FqField) -> Result<Self> {
        let b = a.den().clone();
        Self::new(tau, a, b, f)
    }

    pub fn identity() -> Self {
        StandardAutG2 { tau: FieldAut::identity(), a: RatF::one(), certificate_b: Pol::one() }
    }

    pub fn apply(&self, g2: &G2, g: &G2Elem) -> G2Elem {
        let f = g2.fld();
        let ae1 = self.a.pow_p_power(g2.e(), f).mul(&self.a, f);
        G2Elem { y: self.a.mul(&g.y.apply_aut(&self.tau, f), f), z: ae1.mul(&g.z.apply_aut(&self.tau, f), f) }
    }

    /// φ_{τ⁻¹, τ⁻¹(a⁻¹)}.
    pub fn inverse(&self, f: &FqField) -> Result<Self> {
        let ti = self.tau.inverse(f);
        let a = self.a.inv(f)?.apply_aut(&ti, f);
        let b = ti.apply(self.a.num(), f);
        Self::new(ti, a, b, f)
    }

    /// Applies `self`, then `then`.
    pub fn then(&self, then: &StandardAutG2, f: &FqField) -> Result<Self> {
        let a = then.a.mul(&self.a.apply_aut(&then.tau, f), f);
        let b = then.certificate_b.mul(&then.tau.apply(&self.certificate_b, f), f);
        Self::new(self.tau.then(&then.tau, f), a, b, f)
    }
}

/// True iff every coordinate times the denominator lies in F⁻.
pub fn lattice_member(coords: &[RatF], denominator: &Pol, f: &FqField) -> Result<bool> {
    if denominator.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d = RatF::from_pol(denominator.clone());
    Ok(coords.iter().all(|c| c.mul(&d, f).is_pol()))
}

#[cfg(test)]
mod tests;
