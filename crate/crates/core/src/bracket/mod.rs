//! The bracket ⟨a,b⟩ = aᵉb − abᵉ, bracket spaces, power cosets a(F⁻)^Q ∩ V
//! and codimension measurement through windows.
//!
//! A bracket space ⟨X,Y⟩ is generated from bases of X capped at degree D and
//! of Y capped at e·D. Codimensions are read off in the reference window of
//! degree e·D, below the generation window, and a value is called stable when
//! two successive schedule steps agree or when an ideal witness covers the tail.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpspace::{
    embed, embed_into, span_pols, subspace_intersect, Echelon, FpSubspace, TailSubspaceSpec, Window,
};
use crate::fq::{FqElem, FqField};
use crate::poly::{check_p_power, Pol};

mod audit;

pub use audit::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketForm {
    e: u64,
    fld: FqField,
}

impl BracketForm {
    /// e must be a power of p; e = 1 is accepted as the abelian degenerate case.
    pub fn new(e: u64, fld: &FqField) -> Result<Self> {
        if e != 1 {
            check_p_power(e, fld)?;
        }
        Ok(BracketForm { e, fld: fld.clone() })
    }
    pub fn e(&self) -> u64 {
        self.e
    }
    pub fn fld(&self) -> &FqField {
        &self.fld
    }
    /// ⟨a,b⟩ vanishes identically when e = 1.
    pub fn is_degenerate(&self) -> bool {
        self.e == 1
    }
    /// Audits that rely on e > 2 refuse smaller exponents.
    pub fn require_e_gt_2(&self) -> Result<()> {
        if self.e <= 2 {
            return Err(Error::Unsupported(format!("requires e > 2, got e = {}", self.e)));
        }
        Ok(())
    }

    pub fn bracket(&self, a: &Pol, b: &Pol) -> Pol {
        let f = &self.fld;
        let ae = a.pow_p_power(self.e, f);
        let be = b.pow_p_power(self.e, f);
        ae.mul(b, f).sub(&a.mul(&be, f), f)
    }
}

/// a·(F⁻)^Q inside the window: span of a·γ^Q·t^(-jQ).
pub fn power_coset_space(a: &Pol, qq: u64, w: &Window) -> Result<FpSubspace> {
    let f = &w.fld;
    let Some(da) = a.deg_minus() else {
        return Err(Error::Domain("power coset of 0".into()));
    };
    if qq != 1 {
        check_p_power(qq, f)?;
    }
    if da > w.n {
        return Err(Error::Window(format!("deg a = {da} exceeds window N = {}", w.n)));
    }
    let mut gens = Vec::new();
    let mut j = 0usize;
    while da + j * qq as usize <= w.n {
        for g in f.fp_basis() {
            gens.push(a.mul(&Pol::monomial(f.pow(g, qq), j * qq as usize), f));
        }
        j += 1;
    }
    span_pols(&gens, w)
}

fn sparse(a: &Pol) -> Vec<(usize, FqElem)> {
    a.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect()
}

/// Precomputed x and xᵉ for one basis element.
struct Powered {
    x: Vec<(usize, FqElem)>,
    xe: Vec<(usize, FqElem)>,
    deg: usize,
}

impl Powered {
    fn new(a: &Pol, e: u64, f: &FqField) -> Self {
        Powered { x: sparse(a), xe: sparse(&a.pow_p_power(e, f)), deg: a.deg_minus().unwrap_or(0) }
    }
}

/// Writes ⟨u,w⟩ into buf (cleared by the caller).
fn bracket_into(buf: &mut [FqElem], u: &Powered, w: &Powered, f: &FqField) {
    for &(i, a) in &u.xe {
        for &(j, b) in &w.x {
            buf[i + j] = f.add(buf[i + j], f.mul(a, b));
        }
    }
    for &(i, a) in &u.x {
        for &(j, b) in &w.xe {
            buf[i + j] = f.sub(buf[i + j], f.mul(a, b));
        }
    }
}

/// Streams pairwise brackets into an echelon form over a window of degree ≤ m.
struct BracketSink<'a> {
    f: &'a FqField,
    echelon: Echelon,
    buf: Vec<FqElem>,
    vec: Vec<u8>,
}

impl<'a> BracketSink<'a> {
    fn new(f: &'a FqField, m: usize) -> Self {
        let d = f.d() as usize;
        BracketSink {
            f,
            echelon: Echelon::new(f.p(), d * (m + 1)),
            buf: vec![FqElem::ZERO; m + 1],
            vec: vec![0u8; d * (m + 1)],
        }
    }

    fn flush(&mut self) {
        let d = self.f.d() as usize;
        if d == 1 {
            for (slot, c) in self.vec.iter_mut().zip(&self.buf) {
                *slot = c.index() as u8;
            }
        } else {
            for (i, c) in self.buf.iter().enumerate() {
                self.f.fp_coords_into(*c, &mut self.vec[i * d..i * d + d]);
            }
        }
        self.echelon.insert(&self.vec);
        self.buf.iter_mut().for_each(|c| *c = FqElem::ZERO);
    }

    fn push_bracket(&mut self, u: &Powered, w: &Powered) {
        bracket_into(&mut self.buf, u, w, self.f);
        self.flush();
    }

    fn push_pol(&mut self, a: &Pol) {
        for (i, &c) in a.coeffs().iter().enumerate() {
            self.buf[i] = c;
        }
        self.flush();
    }
}

/// Span of the pairwise brackets of the bases of U and W, inside `out`.
pub fn bracket_space(u: &FpSubspace, w: &FpSubspace, form: &BracketForm, out: &Window) -> Result<FpSubspace> {
    let f = form.fld();
    let cap = u.window().n.max(w.window().n);
    let need = (form.e() as usize + 1) * cap;
    if out.n < need {
        return Err(Error::Window(format!("window N = {} below (e+1)·D = {need}", out.n)));
    }
    let ub: Vec<Powered> = u.basis_pols().iter().map(|x| Powered::new(x, form.e(), f)).collect();
    let wb: Vec<Powered> = w.basis_pols().iter().map(|x| Powered::new(x, form.e(), f)).collect();
    let mut sink = BracketSink::new(f, out.n);
    for x in &ub {
        for y in &wb {
            sink.push_bracket(x, y);
        }
    }
    Ok(FpSubspace::from_echelon(sink.echelon, out))
}

/// An argument of a bracket space: a single element, the subspace V, or a
/// power coset a(F⁻)^Q ∩ V.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arg {
    Elem(Pol),
    V,
    Coset { a: Pol, q: u64 },
}

/// One summand of a target space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Summand {
    Bracket(Arg, Arg),
    Space(Arg),
}

/// Request to certify the tail with the ideal a^e (c^(e²) − c)^(Q/e) F⁻.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRequest {
    pub a: Pol,
    pub c: Pol,
    pub q: u64,
}

/// Target space Σ summands, measured in F⁻ or, when `relative`, inside ⟨V,V⟩.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimProblem {
    pub spec: TailSubspaceSpec,
    pub summands: Vec<Summand>,
    pub relative: bool,
    pub witness: Option<WitnessRequest>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub cap: usize,
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub steps: Vec<ScheduleStep>,
}

impl Schedule {
    pub fn new(pairs: &[(usize, usize)]) -> Self {
        Schedule { steps: pairs.iter().map(|&(cap, window)| ScheduleStep { cap, window }).collect() }
    }

    /// (6, 4(e+1)·6), (9, 4(e+1)·9), both scaled by e²(k+1) when Q appears.
    pub fn default_for(e: u64, k: usize, with_coset: bool) -> Self {
        let s = if with_coset { (e * e) as usize * (k + 1) } else { 1 };
        let e = e as usize;
        Schedule::new(&[(6 * s, 4 * (e + 1) * 6 * s), (9 * s, 4 * (e + 1) * 9 * s)])
    }

    pub fn validate(&self, e: u64) -> Result<()> {
        if self.steps.len() < 2 {
            return Err(Error::Parameter("schedule needs at least two steps".into()));
        }
        for s in &self.steps {
            if s.cap == 0 || s.window < (e as usize + 1) * s.cap {
                return Err(Error::Parameter(format!(
                    "schedule step (D = {}, N = {}) violates N >= (e+1)·D",
                    s.cap, s.window
                )));
            }
        }
        for w in self.steps.windows(2) {
            if w[1].cap <= w[0].cap || w[1].window <= w[0].window {
                return Err(Error::Parameter("schedule steps must increase".into()));
            }
        }
        Ok(())
    }

    /// Parses "D:N,D:N,...".
    pub fn parse(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in s.split(',').filter(|x| !x.trim().is_empty()) {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parameter(format!("schedule entry {part:?} is not D:N")))?;
            let a = a.trim().parse().map_err(|_| Error::Parameter(format!("bad cap {a:?}")))?;
            let b = b.trim().parse().map_err(|_| Error::Parameter(format!("bad window {b:?}")))?;
            pairs.push((a, b));
        }
        Ok(Schedule::new(&pairs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCodim {
    pub cap: usize,
    pub window: usize,
    pub reference: usize,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    pub codim: usize,
    pub input_cap: usize,
    pub window: usize,
    pub reference: usize,
    pub stable: bool,
    pub witness_degree: Option<usize>,
    pub history: Vec<StepCodim>,
}

/// Basis of an argument capped at degree `cap`.
pub(crate) fn arg_basis(arg: &Arg, spec: &TailSubspaceSpec, cap: usize, f: &FqField) -> Result<Vec<Pol>> {
    match arg {
        Arg::Elem(a) => Ok(if a.is_zero() { vec![] } else { vec![a.clone()] }),
        Arg::V => Ok(spec.capped(cap, f)?.basis_pols()),
        Arg::Coset { a, q } => {
            let da = a.deg_minus().ok_or_else(|| Error::Domain("power coset of 0".into()))?;
            if da > cap {
                return Ok(vec![]);
            }
            let w = Window::new(cap, f)?;
            let coset = power_coset_space(a, *q, &w)?;
            let v = spec.capped(cap, f)?;
            Ok(subspace_intersect(&coset, &v)?.basis_pols())
        }
    }
}

fn max_deg(b: &[Powered]) -> usize {
    b.iter().map(|x| x.deg).max().unwrap_or(0)
}

/// Echelon of the generators of the given summands at one schedule step.
pub(crate) struct StepSpan {
    pub echelon: Echelon,
    pub m: usize,
}

pub(crate) fn generate(
    summands: &[Summand],
    spec: &TailSubspaceSpec,
    form: &BracketForm,
    left_cap: usize,
    right_cap: usize,
    reference: usize,
    extra: Option<&StepSpan>,
) -> Result<StepSpan> {
    let f = form.fld();
    let e = form.e();
    let mut parts: Vec<(Vec<Powered>, Vec<Powered>)> = Vec::new();
    let mut plain: Vec<Pol> = Vec::new();
    let mut m = reference;
    for s in summands {
        match s {
            Summand::Bracket(l, r) => {
                let lb: Vec<Powered> = arg_basis(l, spec, left_cap, f)?.iter().map(|x| Powered::new(x, e, f)).collect();
                let rb: Vec<Powered> =
                    arg_basis(r, spec, right_cap, f)?.iter().map(|x| Powered::new(x, e, f)).collect();
                if !lb.is_empty() && !rb.is_empty() {
                    let (dl, dr) = (max_deg(&lb), max_deg(&rb));
                    m = m.max(e as usize * dl + dr).max(dl + e as usize * dr);
                }
                parts.push((lb, rb));
            }
            Summand::Space(a) => {
                for x in arg_basis(a, spec, reference, f)? {
                    m = m.max(x.deg_minus().unwrap_or(0));
                    plain.push(x);
                }
            }
        }
    }
    if let Some(x) = extra {
        m = m.max(x.m);
    }
    let mut sink = BracketSink::new(f, m);
    if let Some(x) = extra {
        sink.echelon = x.echelon.widened(f.d() as usize * (m + 1));
    }
    for x in &plain {
        sink.push_pol(x);
    }
    for (lb, rb) in &parts {
        for u in lb {
            for w in rb {
                sink.push_bracket(u, w);
            }
        }
    }
    Ok(StepSpan { echelon: sink.echelon, m })
}

impl StepSpan {
    /// Codimension of the span ∩ (degree ≤ r) inside the window of degree r.
    pub fn codim_at(&self, r: usize, d: usize) -> usize {
        d * (r + 1) - self.echelon.rank_below(d * (r + 1))
    }
}

/// Reference window used at a schedule step.
pub fn reference_window(step: &ScheduleStep, e: u64) -> usize {
    (e as usize * step.cap).min(step.window)
}

/// Checks that the ideal generator g times γ t^(-j), for all degrees up to
/// the reference window, lies in the span up to a defect of `allowed`.
pub(crate) fn witness_covers(span: &StepSpan, g: &Pol, reference: usize, allowed: usize, f: &FqField) -> Result<bool> {
    let Some(dg) = g.deg_minus() else { return Ok(false) };
    if dg > reference {
        return Ok(false);
    }
    let w = Window::new(span.m, f)?;
    let mut e = span.echelon.clone();
    let before = e.rank();
    let mut v = vec![0u8; w.dim()];
    for j in 0..=reference - dg {
        for gam in f.fp_basis() {
            v.iter_mut().for_each(|c| *c = 0);
            embed_into(&g.mul(&Pol::monomial(gam, j), f), &w, &mut v)?;
            e.insert(&v);
            if e.rank() - before > allowed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn vv_summand() -> Summand {
    Summand::Bracket(Arg::V, Arg::V)
}

/// Measures the codimension of the target along the schedule.
pub fn stabilized_codim(problem: &CodimProblem, form: &BracketForm, schedule: &Schedule) -> Result<CodimReport> {
    schedule.validate(form.e())?;
    let f = form.fld();
    let d = f.d() as usize;
    let mut history = Vec::new();
    let mut last_span = None;
    for step in &schedule.steps {
        let r = reference_window(step, form.e());
        let rc = form.e() as usize * step.cap;
        let span = generate(&problem.summands, &problem.spec, form, step.cap, rc, r, None)?;
        let mut codim = span.codim_at(r, d);
        if problem.relative {
            let vv = generate(&[vv_summand()], &problem.spec, form, step.cap, rc, r, Some(&span))?;
            codim -= vv.codim_at(r, d);
        }
        history.push(StepCodim { cap: step.cap, window: step.window, reference: r, codim });
        last_span = Some(span);
    }
    let n = history.len();
    let mut stable = history[n - 1].codim == history[n - 2].codim;
    let mut witness_degree = None;
    if let (Some(req), Some(span)) = (&problem.witness, &last_span) {
        let b = witness_b(&req.c, form)?;
        let g = req.a.pow_p_power(form.e(), f).mul(&b.pow(req.q / form.e(), f), f);
        let last = history[n - 1].reference;
        if witness_covers(span, &g, last, 2 * problem.spec.k(), f)? {
            witness_degree = g.deg_minus();
            stable = true;
        }
    }
    let lastc = &history[n - 1];
    Ok(CodimReport {
        codim: lastc.codim,
        input_cap: lastc.cap,
        window: lastc.window,
        reference: lastc.reference,
        stable,
        witness_degree,
        history,
    })
}

/// b = c^(e²) − c.
pub fn witness_b(c: &Pol, form: &BracketForm) -> Result<Pol> {
    if c.is_constant() {
        return Err(Error::Domain("c must lie outside F_q".into()));
    }
    let f = form.fld();
    Ok(c.pow_p_power(form.e() * form.e(), f).sub(c, f))
}

fn check_witness_q(qq: u64, form: &BracketForm) -> Result<()> {
    let e = form.e();
    check_p_power(qq, form.fld())?;
    if !qq.is_multiple_of(e) || (qq / e != 1 && check_p_power(qq / e, form.fld()).is_err()) {
        return Err(Error::Parameter(format!("Q = {qq} must be a power of p divisible by e = {e}")));
    }
    Ok(())
}

/// Returns b = c^(e²) − c and checks, for every γ t^(-j) with the ideal
/// element inside the window, the identity
/// ⟨a c^Q, y⟩ − ⟨a, c^(Q/e) y⟩ = a^e b^(Q/e) y.
pub fn ideal_witness(a: &Pol, c: &Pol, qq: u64, form: &BracketForm, w: &Window) -> Result<(Pol, bool)> {
    let b = witness_b(c, form)?;
    check_witness_q(qq, form)?;
    let f = form.fld();
    let e = form.e();
    let acq = a.mul(&c.pow_p_power(qq, f), f);
    let cqe = c.pow(qq / e, f);
    let g = a.pow_p_power(e, f).mul(&b.pow(qq / e, f), f);
    let Some(dg) = g.deg_minus() else { return Ok((b, false)) };
    if dg > w.n {
        return Err(Error::Window(format!("ideal generator degree {dg} exceeds window N = {}", w.n)));
    }
    let mut ok = true;
    for j in 0..=w.n - dg {
        for gam in f.fp_basis() {
            let y = Pol::monomial(gam, j);
            let lhs = form.bracket(&acq, &y).sub(&form.bracket(a, &cqe.mul(&y, f)), f);
            ok &= lhs == g.mul(&y, f);
        }
    }
    Ok((b, ok))
}

/// Checks that ⟨a c^Q, V⟩ + ⟨a, V⟩, generated with the given cap, contains
/// the window part of the ideal a^e b^(Q/e) F⁻ up to codimension 2k.
pub fn ideal_containment(
    a: &Pol,
    c: &Pol,
    qq: u64,
    spec: &TailSubspaceSpec,
    form: &BracketForm,
    cap: usize,
) -> Result<bool> {
    let b = witness_b(c, form)?;
    check_witness_q(qq, form)?;
    let f = form.fld();
    let e = form.e();
    let acq = a.mul(&c.pow_p_power(qq, f), f);
    if !spec.contains(a, f) || !spec.contains(&acq, f) {
        return Err(Error::Domain("a and a·c^Q must lie in V".into()));
    }
    let g = a.pow_p_power(e, f).mul(&b.pow(qq / e, f), f);
    let summands = vec![Summand::Bracket(Arg::Elem(acq), Arg::V), Summand::Bracket(Arg::Elem(a.clone()), Arg::V)];
    let reference = e as usize * cap;
    let span = generate(&summands, spec, form, cap, reference, reference, None)?;
    witness_covers(&span, &g, reference, 2 * spec.k(), f)
}

/// Window membership helper used by audits.
pub(crate) fn pol_in_span(span: &StepSpan, a: &Pol, f: &FqField) -> Result<bool> {
    let w = Window::new(span.m, f)?;
    Ok(span.echelon.contains(&embed(a, &w)?))
}

#[cfg(test)]
mod tests;
