//! Recovery of standard automorphisms from sampled isomorphism data.
//!
//! `solve_affine` reads λ*(f) = a·σ(f(αt⁻¹+β)) off the images of 1 and t⁻¹
//! and verifies every other sample. `heis_recover` rebuilds τ from the ratio
//! functions τ_v(s)·λ̄(v) = λ̄(s·v), then T, c_T and the central part ζ.
//! `hp_recover` reduces H_p to H through the Frobenius.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bracket::BracketForm;
use crate::error::{Error, Result};
use crate::fpspace::{span_pols, Window};
use crate::fq::FqField;
use crate::groups::linalg::{self, RatMat};
use crate::groups::{conformal_factor, Heis, HeisElem, Hp, HpElem, StandardAutG2, StandardAutHeis, G2, G2Elem};
use crate::poly::{FieldAut, Pol, RatF};

/// λ* on a finite slice of V₁.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMapSample {
    pub domain_basis: Vec<Pol>,
    pub images: Vec<Pol>,
}

impl LinearMapSample {
    pub fn new(domain_basis: Vec<Pol>, images: Vec<Pol>, f: &FqField) -> Result<Self> {
        if domain_basis.len() != images.len() {
            return Err(Error::Parameter("domain and image lists differ in length".into()));
        }
        let n = domain_basis.iter().filter_map(Pol::deg_minus).max().unwrap_or(0);
        let span = span_pols(&domain_basis, &Window::new(n, f)?)?;
        if span.dim() != domain_basis.len() {
            return Err(Error::Parameter("domain basis is not F_p-independent".into()));
        }
        Ok(LinearMapSample { domain_basis, images })
    }

    pub fn image_of(&self, a: &Pol) -> Option<&Pol> {
        self.domain_basis.iter().position(|x| x == a).map(|i| &self.images[i])
    }
}

/// The F_p-basis γ·t^(-i) of degree ≤ n, γ running over an F_p-basis of F_q
/// with 1 first.
pub fn fp_monomial_basis(n: usize, f: &FqField) -> Vec<Pol> {
    (0..=n).flat_map(|i| f.fp_basis().into_iter().map(move |g| Pol::monomial(g, i))).collect()
}

/// λ_* on recorded brackets of domain basis elements, by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketMapSample {
    pub pairs: Vec<(usize, usize)>,
    pub images: Vec<Pol>,
}

/// Samples of λ* = a·τ(·) on `basis` and of λ_* = a^(e+1)·τ(⟨·,·⟩) on all
/// pairs i < j.
pub fn make_standard_lambda(
    tau: &FieldAut,
    a: &Pol,
    basis: &[Pol],
    form: &BracketForm,
) -> Result<(LinearMapSample, BracketMapSample)> {
    let f = form.fld();
    if a.is_zero() {
        return Err(Error::Parameter("a must be nonzero".into()));
    }
    let images = basis.iter().map(|x| a.mul(&tau.apply(x, f), f)).collect();
    let ls = LinearMapSample::new(basis.to_vec(), images, f)?;
    let ae1 = a.pow_p_power(form.e(), f).mul(a, f);
    let mut pairs = Vec::new();
    let mut bimages = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
            bimages.push(ae1.mul(&tau.apply(&form.bracket(&basis[i], &basis[j]), f), f));
        }
    }
    Ok((ls, BracketMapSample { pairs, images: bimages }))
}

/// λ_*⟨a,b⟩ = ⟨λ*(a), λ*(b)⟩ on every recorded pair.
pub fn check_bracket_compat(ls: &LinearMapSample, bs: &BracketMapSample, form: &BracketForm) -> bool {
    bs.pairs.len() == bs.images.len()
        && bs.pairs.iter().zip(&bs.images).all(|(&(i, j), img)| {
            match (ls.images.get(i), ls.images.get(j)) {
                (Some(x), Some(y)) => form.bracket(x, y) == *img,
                _ => false,
            }
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRecovery {
    pub a: RatF,
    pub tau: FieldAut,
    /// Domain indices where a·τ(f) differs from the sample; empty on success.
    pub residual: Vec<usize>,
    /// Every consistent τ, least Frobenius power first.
    pub candidates: Vec<FieldAut>,
    /// Set when more than one Galois element fits the data.
    pub ambiguous: bool,
}

impl AffineRecovery {
    pub fn is_consistent(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Recovers (a, σ, α, β) with λ*(f) = a·σ(f(αt⁻¹+β)).
pub fn solve_affine(ls: &LinearMapSample, form: &BracketForm) -> Result<AffineRecovery> {
    let f = form.fld();
    let a = ls
        .image_of(&Pol::one())
        .ok_or_else(|| Error::Parameter("domain basis must contain 1".into()))?
        .clone();
    let lt = ls
        .image_of(&Pol::t_inv_pow(1))
        .ok_or_else(|| Error::Parameter("domain basis must contain t⁻¹".into()))?;
    if a.is_zero() {
        return Err(Error::Inconsistent("image of 1 is zero".into()));
    }
    let (r, rem) = lt.divrem(&a, f)?;
    if !rem.is_zero() || r.deg_minus() != Some(1) {
        return Err(Error::Inconsistent("image(t⁻¹)/image(1) is not of degree 1 in t⁻¹".into()));
    }
    let mut best: Option<(FieldAut, Vec<usize>)> = None;
    let mut candidates = Vec::new();
    for sigma in f.enumerate_galois() {
        let si = f.galois_inverse(sigma);
        let tau = FieldAut::new(sigma, f.apply_galois(si, r.coeff(1)), f.apply_galois(si, r.coeff(0)))?;
        let residual: Vec<usize> = (0..ls.domain_basis.len())
            .filter(|&i| a.mul(&tau.apply(&ls.domain_basis[i], f), f) != ls.images[i])
            .collect();
        if residual.is_empty() {
            candidates.push(tau);
        }
        if best.as_ref().is_none_or(|(_, b)| residual.len() < b.len()) {
            best = Some((tau, residual));
        }
    }
    let (tau, residual) = match candidates.first() {
        Some(t) => (*t, vec![]),
        None => best.expect("at least the identity is enumerated"),
    };
    Ok(AffineRecovery { a: RatF::from_pol(a), tau, residual, ambiguous: candidates.len() > 1, candidates })
}

/// Divides every domain element by c, so a domain inside c·F⁻ can be
/// solved as if it contained 1 and t⁻¹. Undo with `denormalize`.
pub fn normalize_by(ls: &LinearMapSample, c: &Pol, f: &FqField) -> Result<LinearMapSample> {
    let dom = ls.domain_basis.iter().map(|x| x.div_exact(c, f)).collect::<Result<Vec<_>>>()?;
    LinearMapSample::new(dom, ls.images.clone(), f)
}

/// If λ*(c·g) = a′·τ(g) then λ*(h) = (a′/τ(c))·τ(h).
pub fn denormalize(rec: &AffineRecovery, c: &Pol, f: &FqField) -> Result<AffineRecovery> {
    let tc = RatF::from_pol(rec.tau.apply(c, f));
    Ok(AffineRecovery { a: rec.a.div(&tc, f)?, ..rec.clone() })
}

/// ζ(γ) = φ(γ)⁻¹·λ(γ) per generator. Each must be central and ζ must respect
/// every relation (i, j, k) meaning γ_k = γ_i·γ_j.
pub fn split_central(
    g2: &G2,
    generators: &[G2Elem],
    images: &[G2Elem],
    phi: &StandardAutG2,
    relations: &[(usize, usize, usize)],
) -> Result<Vec<G2Elem>> {
    if generators.len() != images.len() {
        return Err(Error::Parameter("generator and image lists differ in length".into()));
    }
    let f = g2.fld();
    let mut zeta = Vec::with_capacity(generators.len());
    for (i, (g, img)) in generators.iter().zip(images).enumerate() {
        let q = g2.mul(&g2.inv(&phi.apply(g2, g)), img);
        if !q.is_central() {
            return Err(Error::Inconsistent(format!("decomposition failure: quotient at generator {i} is not central")));
        }
        zeta.push(q);
    }
    for &(i, j, k) in relations {
        if i.max(j).max(k) >= zeta.len() {
            return Err(Error::Parameter(format!("relation ({i}, {j}, {k}) is out of range")));
        }
        if zeta[k].z != zeta[i].z.add(&zeta[j].z, f) {
            return Err(Error::Inconsistent(format!("ζ is not a homomorphism on the pair ({i}, {j})")));
        }
    }
    Ok(zeta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisRecovery {
    pub t: RatMat,
    pub c_t: RatF,
    pub tau: FieldAut,
    /// Central values ζ(γ) per sample, in input order.
    pub zeta: Vec<RatF>,
    /// Number of (v, w, s) triples on which τ_v(s) = τ_w(s) was checked.
    pub overlap_checks: usize,
    pub ambiguous: bool,
}

impl HeisRecovery {
    pub fn standard(&self, heis: &Heis) -> Result<StandardAutHeis> {
        StandardAutHeis::with_default_certificate(self.t.clone(), self.tau, heis)
    }
}

/// s with w = s·v, if any.
fn proportion(v: &[RatF], w: &[RatF], f: &FqField) -> Option<RatF> {
    let k = v.iter().position(|x| !x.is_zero())?;
    let s = w[k].div(&v[k], f).ok()?;
    (!s.is_zero() && v.iter().zip(w).all(|(a, b)| a.mul(&s, f) == *b)).then_some(s)
}

fn check_sample_dims(heis: &Heis, samples: &[(HeisElem, HeisElem)]) -> Result<()> {
    let n = heis.form().dim();
    if samples.iter().any(|(g, h)| g.v.len() != n || h.v.len() != n) {
        return Err(Error::Parameter(format!("samples must have {n} vector coordinates")));
    }
    Ok(())
}

/// Recovers φ_{T,τ} and ζ with λ(γ) = φ_{T,τ}(γ)·ζ(γ) from samples (γ, λ(γ)).
pub fn heis_recover(heis: &Heis, samples: &[(HeisElem, HeisElem)]) -> Result<HeisRecovery> {
    check_sample_dims(heis, samples)?;
    let f = heis.fld();
    let n = heis.form().dim();

    // τ_v(s) from pairs (v, s·v); all τ_v must agree on common s.
    let mut tau_obs: HashMap<RatF, RatF> = HashMap::new();
    let mut overlap_checks = 0;
    for (i, (gi, li)) in samples.iter().enumerate() {
        if gi.is_central() {
            continue;
        }
        for (j, (gj, lj)) in samples.iter().enumerate() {
            if i == j || gj.is_central() {
                continue;
            }
            let Some(s) = proportion(&gi.v, &gj.v, f) else { continue };
            if s == RatF::one() {
                continue;
            }
            let ts = proportion(&li.v, &lj.v, f)
                .ok_or_else(|| Error::Inconsistent(format!("λ̄ is not semilinear on samples {i} and {j}")))?;
            match tau_obs.get(&s) {
                Some(prev) if *prev != ts => {
                    return Err(Error::Inconsistent(format!("τ_v disagree on the overlap at s = {s:?}")));
                }
                Some(_) => overlap_checks += 1,
                None => {
                    tau_obs.insert(s, ts);
                }
            }
        }
    }
    let tinv = RatF::from_pol(Pol::t_inv_pow(1));
    let r = tau_obs
        .get(&tinv)
        .and_then(|x| x.as_pol().cloned())
        .ok_or_else(|| Error::Parameter("samples must contain a pair (v, t⁻¹v) with polynomial ratio".into()))?;
    if r.deg_minus() != Some(1) {
        return Err(Error::Inconsistent("τ(t⁻¹) is not of degree 1".into()));
    }
    let mut taus = Vec::new();
    for sigma in f.enumerate_galois() {
        let si = f.galois_inverse(sigma);
        let tau = FieldAut::new(sigma, f.apply_galois(si, r.coeff(1)), f.apply_galois(si, r.coeff(0)))?;
        if tau_obs.iter().all(|(s, ts)| s.apply_aut(&tau, f) == *ts) {
            taus.push(tau);
        }
    }
    if taus.len() > 1 && f.d() > 1 {
        let has_const = tau_obs.keys().any(|s| s.as_pol().is_some_and(|p| p.is_constant()));
        if !has_const {
            return Err(Error::Parameter("samples need a pair (v, x·v) with x generating F_q".into()));
        }
    }
    let tau = *taus
        .first()
        .ok_or_else(|| Error::Inconsistent("no field automorphism matches the ratio functions".into()))?;
    let ti = tau.inverse(f);

    // T from 2m samples with independent projections.
    let mut chosen: Vec<usize> = Vec::new();
    for (i, (g, _)) in samples.iter().enumerate() {
        if chosen.len() == n {
            break;
        }
        let mut vs: Vec<Vec<RatF>> = chosen.iter().map(|&c| samples[c].0.v.clone()).collect();
        vs.push(g.v.clone());
        if linalg::rank(&vs, f) == vs.len() {
            chosen.push(i);
        }
    }
    if chosen.len() < n {
        return Err(Error::Domain(format!("projections span rank {} < {n}", chosen.len())));
    }
    let b = linalg::from_columns(&chosen.iter().map(|&c| samples[c].0.v.clone()).collect::<Vec<_>>());
    let l = linalg::from_columns(
        &chosen
            .iter()
            .map(|&c| samples[c].1.v.iter().map(|x| x.apply_aut(&ti, f)).collect())
            .collect::<Vec<_>>(),
    );
    let t = linalg::mat_mul(&l, &linalg::inverse(&b, f)?, f);
    let c_t = conformal_factor(&t, heis.form(), f).map_err(|e| match e {
        Error::NotConformal(m) => Error::Inconsistent(format!("T is not conformally symplectic: {m}")),
        other => other,
    })?;

    // λ(0, z) = (0, τ(C z)) with C = c_T on central samples.
    for (i, (g, img)) in samples.iter().enumerate() {
        if !g.is_central() || g.z.is_zero() {
            continue;
        }
        if !img.is_central() {
            return Err(Error::Inconsistent(format!("central sample {i} maps outside the center")));
        }
        let c = img.z.apply_aut(&ti, f).div(&g.z, f)?;
        if c != c_t {
            return Err(Error::Inconsistent(format!("λ(z)/z at sample {i} differs from c_T")));
        }
    }

    let phi = StandardAutHeis { t: t.clone(), c_t: c_t.clone(), tau, certificate_b: Pol::one() };
    let mut zeta = Vec::with_capacity(samples.len());
    for (i, (g, img)) in samples.iter().enumerate() {
        let q = heis.mul(&heis.inv(&phi.apply(heis, g)?)?, img)?;
        if !q.is_central() {
            return Err(Error::Inconsistent(format!("λ and φ_(T,τ) differ off the center at sample {i}")));
        }
        zeta.push(q.z);
    }
    Ok(HeisRecovery { t, c_t, tau, zeta, overlap_checks, ambiguous: taus.len() > 1 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpRecovery {
    pub heis: HeisRecovery,
    /// Indices of samples in H′_p, in the order passed to heis_recover.
    pub h_prime: Vec<usize>,
    /// Sampled correspondence (z, Ψ(z)) on the A factor.
    pub a_part: Vec<(RatF, RatF)>,
}

/// Splits samples along H_p = H′_p × A, solves the H′_p part through
/// Fr⁻¹ ∘ μ_p ∘ Fr and checks that recomposition reproduces every image.
pub fn hp_recover(hp: &Hp, heis: &Heis, samples: &[(HpElem, HpElem)]) -> Result<HpRecovery> {
    let mut transported = Vec::new();
    let mut h_prime = Vec::new();
    let mut a_part = Vec::new();
    for (i, (g, img)) in samples.iter().enumerate() {
        if hp.in_a(g) && !g.z.is_zero() {
            if !hp.in_a(img) {
                return Err(Error::Inconsistent(format!("decomposition: A-sample {i} leaves A")));
            }
            a_part.push((g.z.clone(), img.z.clone()));
        } else if hp.in_h_prime(g) {
            if !hp.in_h_prime(img) {
                return Err(Error::Inconsistent(format!("decomposition: H'_p-sample {i} picks up an A component")));
            }
            transported.push((hp.frobenius_untransport(heis, g)?, hp.frobenius_untransport(heis, img)?));
            h_prime.push(i);
        } else {
            return Err(Error::Inconsistent(format!("decomposition: sample {i} is not in H'_p or A")));
        }
    }
    let rec = heis_recover(heis, &transported)?;
    let phi = StandardAutHeis { t: rec.t.clone(), c_t: rec.c_t.clone(), tau: rec.tau, certificate_b: Pol::one() };
    for (k, &i) in h_prime.iter().enumerate() {
        let (g, img) = &transported[k];
        let back = heis.mul(&phi.apply(heis, g)?, &HeisElem::central(rec.zeta[k].clone(), heis.m()))?;
        if back != *img || hp.frobenius_transport(heis, &back)? != samples[i].1 {
            return Err(Error::Inconsistent(format!("recomposition differs at sample {i}")));
        }
    }
    Ok(HpRecovery { heis: rec, h_prime, a_part })
}

/// Elements (eᵢ, 0), (t⁻¹eᵢ, 0), (x·eᵢ, 0) for a generator x of F_q when
/// d > 1, and central (0, 1), (0, t⁻¹): enough for heis_recover.
pub fn heis_sample_set(heis: &Heis) -> Vec<HeisElem> {
    let f = heis.fld();
    let n = heis.form().dim();
    let mut mults = vec![RatF::one(), RatF::from_pol(Pol::t_inv_pow(1))];
    if f.d() > 1 {
        mults.push(RatF::constant(f.generator()));
    }
    let mut out = Vec::new();
    for i in 0..n {
        for s in &mults {
            let mut v = vec![RatF::zero(); n];
            v[i] = s.clone();
            out.push(HeisElem::new(v, RatF::zero()));
        }
    }
    out.push(HeisElem::central(RatF::one(), heis.m()));
    out.push(HeisElem::central(RatF::from_pol(Pol::t_inv_pow(1)), heis.m()));
    out
}
