use serde::{Deserialize, Serialize};

use super::linalg::{self, RatMat};
use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::{FieldAut, Pol, RatF};

/// The standard form ⟨v,w⟩ = Σᵢ (vᵢ w_{m+i} − v_{m+i} wᵢ) on F^{2m}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticForm {
    pub m: usize,
}

impl SymplecticForm {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        Ok(SymplecticForm { m })
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    /// Entry J_ij = ⟨eᵢ, eⱼ⟩ in {−1, 0, 1}.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        let m = self.m;
        if j == i + m && i < m {
            1
        } else if i == j + m && j < m {
            -1
        } else {
            0
        }
    }

    pub fn pair(&self, v: &[RatF], w: &[RatF], f: &FqField) -> RatF {
        let m = self.m;
        (0..m).fold(RatF::zero(), |acc, i| {
            acc.add(&v[i].mul(&w[m + i], f), f).sub(&v[m + i].mul(&w[i], f), f)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeisElem {
    pub v: Vec<RatF>,
    pub z: RatF,
}

impl HeisElem {
    pub fn new(v: Vec<RatF>, z: RatF) -> Self {
        HeisElem { v, z }
    }
    pub fn central(z: RatF, m: usize) -> Self {
        HeisElem { v: vec![RatF::zero(); 2 * m], z }
    }
    pub fn is_central(&self) -> bool {
        self.v.iter().all(RatF::is_zero)
    }
    pub fn coords(&self) -> Vec<RatF> {
        let mut c = self.v.clone();
        c.push(self.z.clone());
        c
    }
}

/// The Heisenberg group F^{2m} × F with the standard form. Requires p > 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heis {
    form: SymplecticForm,
    fld: FqField,
}

impl Heis {
    pub fn new(m: usize, fld: &FqField) -> Result<Self> {
        if fld.p() == 2 {
            return Err(Error::Unsupported("Heisenberg groups need p > 2".into()));
        }
        Ok(Heis { form: SymplecticForm::new(m)?, fld: fld.clone() })
    }
    pub fn m(&self) -> usize {
        self.form.m
    }
    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }
    pub fn fld(&self) -> &FqField {
        &self.fld
    }
    pub fn identity(&self) -> HeisElem {
        HeisElem::central(RatF::zero(), self.m())
    }

    fn check(&self, g: &HeisElem) -> Result<()> {
        if g.v.len() != self.form.dim() {
            return Err(Error::Parameter(format!("expected {} coordinates, got {}", self.form.dim(), g.v.len())));
        }
        Ok(())
    }

    /// (v₁,z₁)∘(v₂,z₂) = (v₁+v₂, z₁+z₂+⟨v₁,v₂⟩).
    pub fn mul(&self, g: &HeisElem, h: &HeisElem) -> Result<HeisElem> {
        self.check(g)?;
        self.check(h)?;
        let f = &self.fld;
        let v = g.v.iter().zip(&h.v).map(|(a, b)| a.add(b, f)).collect();
        let z = g.z.add(&h.z, f).add(&self.form.pair(&g.v, &h.v, f), f);
        Ok(HeisElem { v, z })
    }

    pub fn inv(&self, g: &HeisElem) -> Result<HeisElem> {
        self.check(g)?;
        let f = &self.fld;
        Ok(HeisElem { v: g.v.iter().map(|a| a.neg(f)).collect(), z: g.z.neg(f) })
    }

    /// g h g⁻¹ h⁻¹ = (0, 2⟨v_g, v_h⟩).
    pub fn commutator(&self, g: &HeisElem, h: &HeisElem) -> Result<HeisElem> {
        let gh = self.mul(g, h)?;
        let rest = self.mul(&self.inv(g)?, &self.inv(h)?)?;
        self.mul(&gh, &rest)
    }
}

/// The unique c with ⟨T eᵢ, T eⱼ⟩ = c·⟨eᵢ, eⱼ⟩ for all basis pairs.
pub fn conformal_factor(t: &RatMat, form: &SymplecticForm, f: &FqField) -> Result<RatF> {
    let n = form.dim();
    if t.len() != n || t.iter().any(|r| r.len() != n) {
        return Err(Error::Parameter(format!("T must be {n}×{n}")));
    }
    if linalg::det(t, f)?.is_zero() {
        return Err(Error::Domain("T is singular".into()));
    }
    let cols: Vec<Vec<RatF>> = (0..n).map(|j| linalg::column(t, j)).collect();
    let c = form.pair(&cols[0], &cols[form.m], f);
    for i in 0..n {
        for j in i + 1..n {
            let want = match form.entry(i, j) {
                1 => c.clone(),
                -1 => c.neg(f),
                _ => RatF::zero(),
            };
            if form.pair(&cols[i], &cols[j], f) != want {
                return Err(Error::NotConformal(format!("pairing of columns {i} and {j} breaks the identity")));
            }
        }
    }
    Ok(c)
}

/// φ_{T,τ}(v, z) = (τ(T v), τ(c_T z)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardAutHeis {
    pub t: RatMat,
    pub c_t: RatF,
    pub tau: FieldAut,
    pub certificate_b: Pol,
}

impl StandardAutHeis {
    pub fn new(t: RatMat, tau: FieldAut, certificate_b: Pol, heis: &Heis) -> Result<Self> {
        let f = heis.fld();
        let c_t = conformal_factor(&t, heis.form(), f)?;
        let b = RatF::from_pol(certificate_b.clone());
        if certificate_b.is_zero() || t.iter().flatten().any(|x| !x.mul(&b, f).is_pol()) {
            return Err(Error::Parameter("certificate b must be nonzero with b·T integral".into()));
        }
        Ok(StandardAutHeis { t, c_t, tau, certificate_b })
    }

    /// Uses the product of all entry denominators as certificate.
    pub fn with_default_certificate(t: RatMat, tau: FieldAut, heis: &Heis) -> Result<Self> {
        let f = heis.fld();
        let b = t.iter().flatten().fold(Pol::one(), |acc, x| acc.mul(x.den(), f));
        Self::new(t, tau, b, heis)
    }

    pub fn identity(heis: &Heis) -> Self {
        let n = heis.form().dim();
        StandardAutHeis { t: linalg::identity(n), c_t: RatF::one(), tau: FieldAut::identity(), certificate_b: Pol::one() }
    }

    pub fn apply(&self, heis: &Heis, g: &HeisElem) -> Result<HeisElem> {
        heis.check(g)?;
        let f = heis.fld();
        let tv = linalg::mat_vec(&self.t, &g.v, f);
        Ok(HeisElem {
            v: tv.iter().map(|x| x.apply_aut(&self.tau, f)).collect(),
            z: self.c_t.mul(&g.z, f).apply_aut(&self.tau, f),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqElem;

    fn rp(f: &FqField, c: &[i64]) -> RatF {
        RatF::from_pol(Pol::from_ints(f, c))
    }

    #[test]
    fn p2_is_refused() {
        let f = FqField::new(2, 1).unwrap();
        assert!(matches!(Heis::new(1, &f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn basic_law() {
        let f = FqField::new(3, 1).unwrap();
        let h = Heis::new(1, &f).unwrap();
        let g1 = HeisElem::new(vec![rp(&f, &[1]), RatF::zero()], RatF::zero());
        let g2 = HeisElem::new(vec![RatF::zero(), rp(&f, &[1])], RatF::zero());
        let c = h.commutator(&g1, &g2).unwrap();
        assert_eq!(c, HeisElem::central(rp(&f, &[2]), 1));
        assert_eq!(h.mul(&g1, &h.inv(&g1).unwrap()).unwrap(), h.identity());
        assert_eq!(h.commutator(&g1, &g1).unwrap(), h.identity());
        assert!(h.mul(&g1, &HeisElem::central(RatF::zero(), 2)).is_err());
    }

    #[test]
    fn conformal_examples() {
        let f = FqField::new(3, 1).unwrap();
        let form = SymplecticForm::new(2).unwrap();
        assert_eq!(conformal_factor(&linalg::identity(4), &form, &f).unwrap(), RatF::one());
        let a = rp(&f, &[1, 1]);
        assert_eq!(conformal_factor(&linalg::scalar_matrix(&a, 4), &form, &f).unwrap(), a.mul(&a, &f));
        // Upper triangular with ones on the diagonal: invertible but not conformal.
        let mut t = linalg::identity(4);
        t[0][1] = RatF::one();
        assert!(matches!(conformal_factor(&t, &form, &f), Err(Error::NotConformal(_))));
        let zero = vec![vec![RatF::zero(); 4]; 4];
        assert!(matches!(conformal_factor(&zero, &form, &f), Err(Error::Domain(_))));
    }

    #[test]
    fn scaling_automorphism() {
        let f = FqField::new(3, 1).unwrap();
        let h = Heis::new(1, &f).unwrap();
        let t1 = rp(&f, &[0, 1]);
        let phi = StandardAutHeis::new(linalg::scalar_matrix(&t1, 2), FieldAut::identity(), Pol::one(), &h).unwrap();
        assert_eq!(phi.c_t, rp(&f, &[0, 0, 1]));
        let g = HeisElem::new(vec![rp(&f, &[1]), rp(&f, &[2, 1])], rp(&f, &[1]));
        let img = phi.apply(&h, &g).unwrap();
        assert_eq!(img.v, vec![rp(&f, &[0, 1]), rp(&f, &[0, 2, 1])]);
        assert_eq!(img.z, rp(&f, &[0, 0, 1]));
        let id = StandardAutHeis::identity(&h);
        assert_eq!(id.apply(&h, &g).unwrap(), g);
    }

    #[test]
    fn transvection_over_f9_is_homomorphism() {
        let f = FqField::new(3, 2).unwrap();
        let h = Heis::new(1, &f).unwrap();
        let x = f.generator();
        let mut t = linalg::identity(2);
        t[0][1] = RatF::from_pol(Pol::monomial(x, 1));
        let tau = FieldAut::new(crate::fq::GaloisElement { power: 1 }, FqElem::ONE, FqElem::ZERO).unwrap();
        let phi = StandardAutHeis::new(t, tau, Pol::one(), &h).unwrap();
        let g = HeisElem::new(vec![RatF::from_pol(Pol::monomial(x, 2)), rp(&f, &[1, 1])], rp(&f, &[0, 1]));
        let k = HeisElem::new(vec![rp(&f, &[2]), RatF::from_pol(Pol::monomial(f.mul(x, x), 1))], rp(&f, &[1]));
        let lhs = phi.apply(&h, &h.mul(&g, &k).unwrap()).unwrap();
        let rhs = h.mul(&phi.apply(&h, &g).unwrap(), &phi.apply(&h, &k).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
