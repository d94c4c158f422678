//! Audits of the quantitative statements about bracket spaces.

use serde::{Deserialize, Serialize};

use super::{generate, pol_in_span, stabilized_codim, Arg, BracketForm, CodimProblem, CodimReport, Schedule, Summand,
    WitnessRequest};
use crate::error::{Error, Result};
use crate::fpspace::TailSubspaceSpec;
use crate::fq::{FqElem, FqField};
use crate::poly::{eth_power_ratio_test, factorize, max_eth_power_divisor_degree, poly_gcd, ratio_in_fq, Pol};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropAbResult {
    pub predicted: bool,
    pub measured: bool,
    pub report: CodimReport,
}

impl PropAbResult {
    pub fn pass(&self) -> bool {
        self.predicted == self.measured
    }
}

/// Compares the e-th power ratio test with the measured finiteness of
/// ⟨a,V⟩ + ⟨b,V⟩ inside ⟨V,V⟩.
pub fn prop_ab_audit(
    a: &Pol,
    b: &Pol,
    spec: &TailSubspaceSpec,
    form: &BracketForm,
    schedule: &Schedule,
) -> Result<PropAbResult> {
    form.require_e_gt_2()?;
    let f = form.fld();
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("a and b must be nonzero".into()));
    }
    if ratio_in_fq(a, b, f) {
        return Err(Error::Hypothesis("a/b lies in F_q".into()));
    }
    if !spec.contains(a, f) || !spec.contains(b, f) {
        return Err(Error::Domain("a and b must lie in V".into()));
    }
    let predicted = eth_power_ratio_test(a, b, form.e(), f)?;
    let problem = CodimProblem {
        spec: spec.clone(),
        summands: vec![
            Summand::Bracket(Arg::Elem(a.clone()), Arg::V),
            Summand::Bracket(Arg::Elem(b.clone()), Arg::V),
        ],
        relative: true,
        witness: None,
    };
    let report = stabilized_codim(&problem, form, schedule)?;
    Ok(PropAbResult { predicted, measured: report.stable, report })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimFormulaResult {
    pub measured: usize,
    pub main_term: usize,
    pub s: usize,
    pub x: i64,
    pub bound: i64,
    pub pass: bool,
    pub report: CodimReport,
}

/// Checks that q is e^j with j ≥ 1.
fn check_e_power(qq: u64, e: u64) -> Result<()> {
    let mut m = qq;
    while e > 1 && m.is_multiple_of(e) && m > 1 {
        m /= e;
    }
    if qq < e || m != 1 {
        return Err(Error::Parameter(format!("Q = {qq} must be a power of e = {e} greater than 1")));
    }
    Ok(())
}

/// Nonconstant polynomials of degree ≤ n in index order.
fn nonconstant_upto(n: usize, f: &FqField) -> impl Iterator<Item = Pol> + '_ {
    let q = f.q() as u64;
    (1..=n).flat_map(move |deg| {
        let lower = q.pow(deg as u32);
        (0..(q - 1) * lower).map(move |i| {
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut r = i % lower;
            for _ in 0..deg {
                coeffs.push(FqElem::from_index((r % q) as u32));
                r /= q;
            }
            coeffs.push(FqElem::from_index((i / lower + 1) as u32));
            Pol::from_coeffs(coeffs)
        })
    })
}

/// First c ∉ F_q with deg⁻c ≤ k+1 and a·c^Q ∈ V.
pub fn find_witness_c(a: &Pol, qq: u64, spec: &TailSubspaceSpec, f: &FqField) -> Option<Pol> {
    nonconstant_upto(spec.k() + 1, f).find(|c| spec.contains(&a.mul(&c.pow_p_power(qq, f), f), f))
}

/// Measures codim ⟨a(F⁻)^Q ∩ V, V⟩ and splits it as
/// d(e−1)·deg⁻a + S + X.
pub fn codim_formula_audit(
    a: &Pol,
    spec: &TailSubspaceSpec,
    qq: u64,
    form: &BracketForm,
    schedule: &Schedule,
) -> Result<CodimFormulaResult> {
    let f = form.fld();
    let e = form.e();
    check_e_power(qq, e)?;
    let Some(da) = a.deg_minus() else {
        return Err(Error::Domain("a must be nonzero".into()));
    };
    if !spec.contains(a, f) {
        return Err(Error::Domain("a must lie in V".into()));
    }
    let d = f.d() as usize;
    let k = spec.k();
    let witness = if e > 1 {
        find_witness_c(a, qq, spec, f).map(|c| WitnessRequest { a: a.clone(), c, q: qq })
    } else {
        None
    };
    let problem = CodimProblem {
        spec: spec.clone(),
        summands: vec![Summand::Bracket(Arg::Coset { a: a.clone(), q: qq }, Arg::V)],
        relative: false,
        witness,
    };
    let report = stabilized_codim(&problem, form, schedule)?;
    let main_term = d * (e as usize - 1) * da;
    let s = d * max_eth_power_divisor_degree(a, e, f)?;
    let measured = report.codim;
    let x = measured as i64 - main_term as i64 - s as i64;
    let bound = (d as u64 * e * (k as u64 + 1) * qq) as i64 + 3 * k as i64;
    Ok(CodimFormulaResult { measured, main_term, s, x, bound, pass: 0 <= x && x <= bound, report })
}

/// Checks ⟨a,F⁻⟩ + ⟨1,F⁻⟩ ⊂ ⟨a^(eⁿ),F⁻⟩ + ⟨1,F⁻⟩ on generators.
///
/// The left side uses the cap D of the last schedule step. The right side is
/// generated with cap eⁿ(D + deg⁻a), enough to reach every term of the
/// telescoped identity ⟨v,a⟩ = ⟨vᵉa,1⟩ + ⟨vᵉ,aᵉ⟩ + ⟨vaᵉ,1⟩.
pub fn frobenius_monotonicity_audit(a: &Pol, n: u32, form: &BracketForm, schedule: &Schedule) -> Result<bool> {
    let f = form.fld();
    let Some(da) = a.deg_minus() else {
        return Err(Error::Domain("a must be nonzero".into()));
    };
    if n == 0 {
        return Ok(true);
    }
    let cap = schedule
        .steps
        .last()
        .ok_or_else(|| Error::Parameter("empty schedule".into()))?
        .cap;
    let en = form
        .e()
        .checked_pow(n)
        .ok_or_else(|| Error::Resource(format!("e^{n} overflows")))?;
    let spec = TailSubspaceSpec::full();
    let one = Arg::Elem(Pol::one());
    let right = generate(
        &[Summand::Bracket(Arg::Elem(a.pow_p_power(en, f)), Arg::V), Summand::Bracket(one.clone(), Arg::V)],
        &spec,
        form,
        0,
        en as usize * (cap + da),
        0,
        None,
    )?;
    for x in [a.clone(), Pol::one()] {
        for j in 0..=cap {
            for g in f.fp_basis() {
                let v = form.bracket(&x, &Pol::monomial(g, j));
                if !v.is_zero() && !pol_in_span(&right, &v, f)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdCodimResult {
    pub measured: usize,
    pub gcd_deg: usize,
    pub report: CodimReport,
}

/// Measures ⟨a₁(F⁻)^Q ∩ V, V⟩ + ⟨a₂(F⁻)^Q ∩ V, V⟩ inside ⟨V,V⟩.
pub fn gcd_codim_audit(
    a1: &Pol,
    a2: &Pol,
    spec: &TailSubspaceSpec,
    qq: u64,
    form: &BracketForm,
    schedule: &Schedule,
) -> Result<GcdCodimResult> {
    let f = form.fld();
    if a1.is_zero() || a2.is_zero() {
        return Err(Error::Domain("a1 and a2 must be nonzero".into()));
    }
    if !spec.contains(a1, f) || !spec.contains(a2, f) {
        return Err(Error::Domain("a1 and a2 must lie in V".into()));
    }
    let gcd_deg = poly_gcd(a1, a2, f)?.deg_minus().unwrap_or(0);
    let problem = CodimProblem {
        spec: spec.clone(),
        summands: vec![
            Summand::Bracket(Arg::Coset { a: a1.clone(), q: qq }, Arg::V),
            Summand::Bracket(Arg::Coset { a: a2.clone(), q: qq }, Arg::V),
        ],
        relative: true,
        witness: None,
    };
    let report = stabilized_codim(&problem, form, schedule)?;
    Ok(GcdCodimResult { measured: report.codim, gcd_deg, report })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdFit {
    pub c: usize,
    pub upper_ok: usize,
    pub lower_ok: usize,
    pub total: usize,
}

/// Fits C = ⌈max measured/(gcd_deg+1)⌉ + 1 and counts samples meeting
/// measured ≤ C·g + C and d·g − C ≤ measured.
pub fn fit_gcd_constant(samples: &[(usize, usize)], d: usize) -> GcdFit {
    let c = samples.iter().map(|&(m, g)| m.div_ceil(g + 1)).max().unwrap_or(0) + 1;
    let upper_ok = samples.iter().filter(|&&(m, g)| m <= c * g + c).count();
    let lower_ok = samples.iter().filter(|&&(m, g)| (d * g) as i64 - c as i64 <= m as i64).count();
    GcdFit { c, upper_ok, lower_ok, total: samples.len() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeparableCount {
    pub count: u64,
    pub total: u64,
    pub bound_num: u128,
    pub bound_den: u128,
}

impl QSeparableCount {
    pub fn pass(&self) -> bool {
        (self.count as u128) * self.bound_den <= self.bound_num
    }
    pub fn bound(&self) -> f64 {
        self.bound_num as f64 / self.bound_den as f64
    }
}

/// Largest enumeration accepted by qseparable_count_audit.
pub const QSEP_ENUM_LIMIT: u64 = 1_000_000;

/// Counts degree-m elements with an irreducible factor of multiplicity ≥ Q
/// and returns them with the bound q^(m+2)/(q^(Q−1) − 1).
pub fn qseparable_count_audit(q: u32, qq: u64, m: usize) -> Result<QSeparableCount> {
    let f = FqField::from_q(q)?;
    crate::poly::check_p_power(qq, &f)?;
    if m == 0 {
        return Err(Error::Parameter("m must be at least 1".into()));
    }
    let qm = (q as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    let total = (q as u64 - 1).saturating_mul(qm);
    if total > QSEP_ENUM_LIMIT {
        return Err(Error::Resource(format!("{total} elements exceed the enumeration limit {QSEP_ENUM_LIMIT}")));
    }
    // Units do not change the factorization, so count monics and scale.
    let mut monic = 0u64;
    for i in 0..qm {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut r = i;
        for _ in 0..m {
            coeffs.push(FqElem::from_index((r % q as u64) as u32));
            r /= q as u64;
        }
        coeffs.push(FqElem::ONE);
        let a = Pol::from_coeffs(coeffs);
        if factorize(&a, &f)?.factors.iter().any(|(_, mult)| *mult as u64 >= qq) {
            monic += 1;
        }
    }
    let qb = q as u128;
    let bound_den = qb
        .checked_pow(qq as u32 - 1)
        .ok_or_else(|| Error::Resource(format!("q^(Q-1) overflows for Q = {qq}")))?
        - 1;
    Ok(QSeparableCount { count: monic * (q as u64 - 1), total, bound_num: qb.pow(m as u32 + 2), bound_den })
}
