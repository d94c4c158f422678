//! Per-suite instance generators and runners.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::gen::{self, instance_rng, LinearTwist};
use super::solve::{solve_g2, solve_hp, G2Deck, HpDeck};
use super::{ExperimentConfig, InstanceRecord, SuiteName};
use crate::bracket::{
    codim_formula_audit, fit_gcd_constant, frobenius_monotonicity_audit, gcd_codim_audit, ideal_containment,
    ideal_witness, prop_ab_audit, qseparable_count_audit, BracketForm, Schedule,
};
use crate::error::Result;
use crate::fpspace::{TailSubspaceSpec, Window};
use crate::fq::{FqElem, FqField};
use crate::groups::linalg::{self, RatMat};
use crate::groups::{Heis, HeisElem, Hp, HpElem, StandardAutG2, StandardAutHeis, G2, G2Elem};
use crate::poly::{eth_power_ratio_test, ratio_in_fq, FieldAut, Pol, RatF};
use crate::rigidity::{fp_monomial_basis, heis_recover, heis_sample_set};

/// Degree bound of the G₂ round-trip basis γ·t^(-i).
const G2_BASIS_DEG: usize = 3;

/// A generated instance; serialized as the record input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    GroupLaws {
        trivial: bool,
        g2: Vec<G2Elem>,
        g2_aut: StandardAutG2,
        heis: Option<Vec<HeisElem>>,
        heis_aut: Option<StandardAutHeis>,
        hp: Option<Vec<HpElem>>,
    },
    PropAb { trivial: bool, k: usize, spec: TailSubspaceSpec, a: Pol, b: Pol, positive: bool },
    IdealWitness { trivial: bool, k: usize, spec: TailSubspaceSpec, a: Pol, c: Pol, q: u64 },
    CodimFormula { trivial: bool, k: usize, spec: TailSubspaceSpec, a: Pol, q: u64 },
    FrobeniusMono { trivial: bool, a: Pol, n: u32 },
    GcdBounds { trivial: bool, k: usize, spec: TailSubspaceSpec, a1: Pol, a2: Pol, q: u64 },
    QsepCount { trivial: bool, field_q: u32, q: u64, m: usize },
    G2Roundtrip { trivial: bool, tau: FieldAut, a: Pol, twist: LinearTwist, corrupt: Corruption },
    HeisRoundtrip { trivial: bool, t: RatMat, tau: FieldAut, twist: LinearTwist, extra: Vec<HeisElem> },
    HpRoundtrip {
        trivial: bool,
        t: RatMat,
        tau: FieldAut,
        twist: LinearTwist,
        a_samples: Vec<RatF>,
        psi_scale: FqElem,
        psi_shift: usize,
    },
}

/// How the corrupted G₂ variant is damaged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    /// Adds t⁻¹ to the y-image of one generator.
    LinearImage { index: usize },
    /// Adds 1 to the z-image of a product, breaking ζ on a relation.
    Relation { index: usize },
}

impl Instance {
    pub fn is_trivial(&self) -> bool {
        match self {
            Instance::GroupLaws { trivial, .. }
            | Instance::PropAb { trivial, .. }
            | Instance::IdealWitness { trivial, .. }
            | Instance::CodimFormula { trivial, .. }
            | Instance::FrobeniusMono { trivial, .. }
            | Instance::GcdBounds { trivial, .. }
            | Instance::QsepCount { trivial, .. }
            | Instance::G2Roundtrip { trivial, .. }
            | Instance::HeisRoundtrip { trivial, .. }
            | Instance::HpRoundtrip { trivial, .. } => *trivial,
        }
    }
}

pub(super) struct Ctx {
    pub cfg: ExperimentConfig,
    pub f: FqField,
    pub form: BracketForm,
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let f = cfg.field()?;
        let form = BracketForm::new(cfg.e, &f)?;
        Ok(Ctx { cfg: cfg.clone(), f, form })
    }

    fn schedule_or(&self, default: Schedule) -> Schedule {
        self.cfg.schedule.clone().unwrap_or(default)
    }
}

/// Deterministic instance list for a suite. Instance i draws from the stream
/// seeded with seed + i; instance 0 is an identity/zero-class case.
pub fn generate_instances(kind: SuiteName, cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Instance>> {
    let ctx = Ctx::new(cfg)?;
    if kind == SuiteName::QsepCount {
        let cells: Vec<(u64, usize)> = cfg.qs.iter().flat_map(|&q| (1..=cfg.m).map(move |m| (q, m))).collect();
        return Ok(cells
            .into_iter()
            .enumerate()
            .map(|(i, (q, m))| Instance::QsepCount { trivial: i == 0, field_q: ctx.f.q(), q, m })
            .collect());
    }
    (0..cfg.trials.max(1))
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            match kind {
                SuiteName::GroupLaws => gen_group_laws(i, &mut rng, &ctx),
                SuiteName::PropAb => gen_prop_ab(i, &mut rng, &ctx),
                SuiteName::IdealWitness => gen_ideal_witness(i, &mut rng, &ctx),
                SuiteName::CodimFormula => gen_codim_formula(i, &mut rng, &ctx),
                SuiteName::FrobeniusMono => gen_frobenius(i, &mut rng, &ctx),
                SuiteName::GcdBounds => gen_gcd(i, &mut rng, &ctx),
                SuiteName::G2Roundtrip => gen_g2(i, &mut rng, &ctx),
                SuiteName::HeisRoundtrip => {
                    let (t, tau, twist, extra) = gen_heis_data(i, &mut rng, &ctx);
                    Ok(Instance::HeisRoundtrip { trivial: i == 0, t, tau, twist, extra })
                }
                SuiteName::HpRoundtrip => gen_hp(i, &mut rng, &ctx),
                SuiteName::QsepCount => unreachable!("handled above"),
            }
        })
        .collect()
}

fn pick<T: Copy>(xs: &[T], i: usize) -> T {
    xs[i % xs.len()]
}

fn spec_for<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<(usize, TailSubspaceSpec)> {
    let k = pick(&ctx.cfg.ks, i);
    if i == 0 {
        return Ok((0, TailSubspaceSpec::full()));
    }
    Ok((k, gen::tail_spec(rng, k, ctx.cfg.depth_for(k), &ctx.f)?))
}

fn gen_group_laws<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let m = ctx.cfg.m.max(1);
    let heis_ok = f.p() > 2;
    if i == 0 {
        let heis = Heis::new(m, f).ok();
        return Ok(Instance::GroupLaws {
            trivial: true,
            g2: vec![G2Elem::identity(); 3],
            g2_aut: StandardAutG2::identity(),
            heis: heis.as_ref().map(|h| vec![h.identity(); 3]),
            heis_aut: heis.as_ref().map(StandardAutHeis::identity),
            hp: Some(vec![HpElem::central(RatF::zero(), m); 3]),
        });
    }
    let g2 = (0..3).map(|_| gen::g2_elem(rng, f)).collect();
    let a = gen::draw_until(rng, |r| gen::ratf(r, f), |a| !a.is_zero())?;
    let g2_aut = StandardAutG2::with_default_certificate(gen::field_aut(rng, f), a, f)?;
    let (heis, heis_aut) = if heis_ok {
        let h = Heis::new(m, f)?;
        let elems = (0..3).map(|_| gen::heis_elem(rng, m, f)).collect();
        let t = gen::conformal_matrix(rng, m, f);
        (Some(elems), Some(StandardAutHeis::with_default_certificate(t, gen::field_aut(rng, f), &h)?))
    } else {
        (None, None)
    };
    let hp = Some((0..3).map(|_| gen::hp_elem(rng, m, f)).collect());
    Ok(Instance::GroupLaws { trivial: false, g2, g2_aut, heis, heis_aut, hp })
}

fn gen_prop_ab<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let e = ctx.cfg.e;
    if i == 0 {
        let b = Pol::t_inv_pow(e as usize);
        return Ok(Instance::PropAb { trivial: true, k: 0, spec: TailSubspaceSpec::full(), a: Pol::one(), b, positive: true });
    }
    let (k, spec) = spec_for(i, rng, ctx)?;
    // Even instances: b = a·yᵉ. Odd: b = a·yᵉ·u with deg⁻u ≢ 0 mod e.
    let positive = i.is_multiple_of(2);
    let (a, b) = gen::draw_until(
        rng,
        |r| {
            let a = gen::pol_deg_in(r, 0..4, f);
            let y = if positive {
                gen::pol_deg_in(r, 1..3, f)
            } else {
                gen::pol_deg_in(r, 0..3, f)
            };
            let mut b = a.mul(&y.pow_p_power(e, f), f);
            if !positive {
                let u = gen::pol_deg_in(r, 1..e as usize, f);
                b = b.mul(&u, f);
            }
            (a, b)
        },
        |(a, b)| spec.contains(a, f) && spec.contains(b, f) && !ratio_in_fq(a, b, f),
    )?;
    Ok(Instance::PropAb { trivial: false, k, spec, a, b, positive })
}

fn gen_ideal_witness<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let q = pick(&ctx.cfg.qs, i);
    if i == 0 {
        let spec = TailSubspaceSpec::full();
        return Ok(Instance::IdealWitness { trivial: true, k: 0, spec, a: Pol::one(), c: Pol::t_inv_pow(1), q });
    }
    let (k, spec) = spec_for(i, rng, ctx)?;
    let (a, c) = gen::draw_until(
        rng,
        |r| (gen::pol_deg_in(r, 0..4, f), gen::pol_deg_in(r, 1..k + 2, f)),
        |(a, c)| spec.contains(a, f) && spec.contains(&a.mul(&c.pow_p_power(q, f), f), f),
    )?;
    Ok(Instance::IdealWitness { trivial: false, k, spec, a, c, q })
}

fn gen_codim_formula<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let q = pick(&ctx.cfg.qs, i);
    if i == 0 {
        return Ok(Instance::CodimFormula { trivial: true, k: 0, spec: TailSubspaceSpec::full(), a: Pol::one(), q });
    }
    let (k, spec) = spec_for(i, rng, ctx)?;
    let a = gen::draw_until(rng, |r| gen::pol_deg_in(r, 0..5, f), |a| spec.contains(a, f))?;
    Ok(Instance::CodimFormula { trivial: false, k, spec, a, q })
}

fn gen_frobenius<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let n = pick(&ctx.cfg.ns, i);
    let a = if i == 0 { Pol::one() } else { gen::pol_deg_in(rng, 0..5, &ctx.f) };
    Ok(Instance::FrobeniusMono { trivial: i == 0, a, n })
}

fn gen_gcd<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let q = ctx.cfg.qs[0];
    if i == 0 {
        let spec = TailSubspaceSpec::full();
        return Ok(Instance::GcdBounds { trivial: true, k: 0, spec, a1: Pol::one(), a2: Pol::t_inv_pow(1), q });
    }
    let (k, spec) = spec_for(i, rng, ctx)?;
    // Common factor of degree cycling through 0..=4.
    let gd = i % 5;
    let (a1, a2) = gen::draw_until(
        rng,
        |r| {
            let g = gen::pol_of_degree(r, gd, f);
            (g.mul(&gen::pol_deg_in(r, 0..3, f), f), g.mul(&gen::pol_deg_in(r, 0..3, f), f))
        },
        |(a1, a2)| spec.contains(a1, f) && spec.contains(a2, f),
    )?;
    Ok(Instance::GcdBounds { trivial: false, k, spec, a1, a2, q })
}

fn gen_g2<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let nb = fp_monomial_basis(G2_BASIS_DEG, f).len();
    let nprod = nb - 1;
    let corrupt = if i.is_multiple_of(2) {
        Corruption::LinearImage { index: rng.gen_range(0..nb) }
    } else {
        Corruption::Relation { index: nb + rng.gen_range(0..nprod) }
    };
    if i == 0 {
        let twist = LinearTwist::zero(1, G2_BASIS_DEG, f);
        return Ok(Instance::G2Roundtrip { trivial: true, tau: FieldAut::identity(), a: Pol::one(), twist, corrupt });
    }
    let tau = gen::field_aut(rng, f);
    let a = gen::pol_deg_in(rng, 0..3, f);
    let twist = LinearTwist::random(rng, 1, G2_BASIS_DEG, f);
    Ok(Instance::G2Roundtrip { trivial: false, tau, a, twist, corrupt })
}

fn gen_heis_data<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> (RatMat, FieldAut, LinearTwist, Vec<HeisElem>) {
    let f = &ctx.f;
    let m = ctx.cfg.m;
    if i == 0 {
        return (linalg::identity(2 * m), FieldAut::identity(), LinearTwist::zero(2 * m, 2, f), vec![]);
    }
    let t = gen::conformal_matrix(rng, m, f);
    let tau = gen::field_aut(rng, f);
    let twist = LinearTwist::random(rng, 2 * m, 2, f);
    let extra = (0..3)
        .map(|_| {
            let mut g = gen::heis_pol_elem(rng, m, 2, f);
            g.z = RatF::from_pol(gen::pol_upto(rng, 2, f));
            g
        })
        .collect();
    (t, tau, twist, extra)
}

fn gen_hp<R: Rng>(i: usize, rng: &mut R, ctx: &Ctx) -> Result<Instance> {
    let f = &ctx.f;
    let p = f.p() as usize;
    let (t, tau, twist, _) = gen_heis_data(i, rng, ctx);
    let a_samples = if i == 0 {
        vec![RatF::from_pol(Pol::t_inv_pow(1))]
    } else {
        (0..3)
            .map(|_| {
                gen::draw_until(
                    rng,
                    |r| {
                        let c: Vec<FqElem> =
                            (0..6).map(|j| if j % p == 0 { FqElem::ZERO } else { gen::scalar(r, f) }).collect();
                        Pol::from_coeffs(c)
                    },
                    |x| !x.is_zero(),
                )
                .map(RatF::from_pol)
            })
            .collect::<Result<_>>()?
    };
    let (psi_scale, psi_shift) = if i == 0 { (FqElem::ONE, 0) } else { (gen::nonzero_scalar(rng, f), rng.gen_range(0..3)) };
    Ok(Instance::HpRoundtrip { trivial: i == 0, t, tau, twist, a_samples, psi_scale, psi_shift })
}

pub(super) fn run_instance(inst: &Instance, ctx: &Ctx) -> Result<(Value, bool)> {
    let f = &ctx.f;
    let form = &ctx.form;
    let e = ctx.cfg.e;
    match inst {
        Instance::GroupLaws { g2: g, g2_aut, heis: hs, heis_aut, hp: ps, .. } => {
            let mut checks = BTreeMap::new();
            let g2 = G2::from_form(form.clone());
            checks.insert("g2_assoc", g2.mul(&g2.mul(&g[0], &g[1]), &g[2]) == g2.mul(&g[0], &g2.mul(&g[1], &g[2])));
            checks.insert("g2_inverse", g2.mul(&g[0], &g2.inv(&g[0])) == G2Elem::identity());
            let br = g[0].y.pow_p_power(e, f).mul(&g[1].y, f).sub(&g[0].y.mul(&g[1].y.pow_p_power(e, f), f), f);
            checks.insert("g2_commutator", g2.commutator(&g[0], &g[1]) == G2Elem::new(RatF::zero(), br));
            checks.insert(
                "g2_aut_hom",
                g2_aut.apply(&g2, &g2.mul(&g[0], &g[1])) == g2.mul(&g2_aut.apply(&g2, &g[0]), &g2_aut.apply(&g2, &g[1])),
            );
            let m = ctx.cfg.m.max(1);
            if let (Some(h), Some(phi)) = (hs, heis_aut) {
                let heis = Heis::new(m, f)?;
                let assoc = heis.mul(&heis.mul(&h[0], &h[1])?, &h[2])? == heis.mul(&h[0], &heis.mul(&h[1], &h[2])?)?;
                checks.insert("heis_assoc", assoc);
                let two = f.from_int(2);
                let c = HeisElem::central(heis.form().pair(&h[0].v, &h[1].v, f).scale(two, f), m);
                checks.insert("heis_commutator", heis.commutator(&h[0], &h[1])? == c);
                let lhs = phi.apply(&heis, &heis.mul(&h[0], &h[1])?)?;
                checks.insert("heis_aut_hom", lhs == heis.mul(&phi.apply(&heis, &h[0])?, &phi.apply(&heis, &h[1])?)?);
                let hp = Hp::new(m, f)?;
                let fr = hp.frobenius_transport(&heis, &heis.mul(&h[0], &h[1])?)?;
                let prod = hp.mul(&hp.frobenius_transport(&heis, &h[0])?, &hp.frobenius_transport(&heis, &h[1])?)?;
                checks.insert("frobenius_hom", fr == prod);
            }
            if let Some(x) = ps {
                let hp = Hp::new(m, f)?;
                checks.insert("hp_assoc", hp.mul(&hp.mul(&x[0], &x[1])?, &x[2])? == hp.mul(&x[0], &hp.mul(&x[1], &x[2])?)?);
                checks.insert("hp_inverse", hp.mul(&x[0], &hp.inv(&x[0])?)? == hp.identity());
            }
            let pass = checks.values().all(|&b| b);
            Ok((json!({ "checks": checks }), pass))
        }
        Instance::PropAb { spec, a, b, positive, .. } => {
            let sched = ctx.schedule_or(Schedule::new(&[(24, 96), (30, 120)]));
            let r = prop_ab_audit(a, b, spec, form, &sched)?;
            let construct_ok = eth_power_ratio_test(a, b, e, f)? == *positive;
            let out = json!({
                "predicted": r.predicted,
                "measured": r.measured,
                "codim": r.report.codim,
                "history": r.report.history.iter().map(|h| h.codim).collect::<Vec<_>>(),
                "reference": r.report.reference,
                "construction_matches": construct_ok,
            });
            Ok((out, r.pass() && construct_ok))
        }
        Instance::IdealWitness { spec, a, c, q, .. } => {
            let b = c.pow_p_power(e * e, f).sub(c, f);
            let dg = a.pow_p_power(e, f).mul(&b.pow(q / e, f), f).deg_minus().unwrap_or(0);
            let (_, identity) = ideal_witness(a, c, *q, form, &Window::new(dg + 2, f)?)?;
            // Reference window e·cap leaves (e−1)·deg⁻g degrees of ideal multiples to cover.
            let cap = dg.max(1);
            let contained = ideal_containment(a, c, *q, spec, form, cap)?;
            Ok((json!({ "identity": identity, "containment": contained, "ideal_degree": dg, "cap": cap }), identity && contained))
        }
        Instance::CodimFormula { k, spec, a, q, .. } => {
            let sched = ctx.schedule_or(Schedule::default_for(e, *k, true));
            let r = codim_formula_audit(a, spec, *q, form, &sched)?;
            let out = json!({
                "measured": r.measured,
                "main_term": r.main_term,
                "s": r.s,
                "x": r.x,
                "bound": r.bound,
                "stable": r.report.stable,
                "witness_degree": r.report.witness_degree,
                "reference": r.report.reference,
                "history": r.report.history.iter().map(|h| h.codim).collect::<Vec<_>>(),
            });
            Ok((out, r.pass && r.report.stable))
        }
        Instance::FrobeniusMono { a, n, .. } => {
            let sched = ctx.schedule_or(Schedule::new(&[(10, 40), (12, 48)]));
            let ok = frobenius_monotonicity_audit(a, *n, form, &sched)?;
            Ok((json!({ "contained": ok }), ok))
        }
        Instance::GcdBounds { spec, a1, a2, q, .. } => {
            let sched = ctx.schedule_or(Schedule::new(&[(12, 48), (18, 72), (24, 96)]));
            let r = gcd_codim_audit(a1, a2, spec, *q, form, &sched)?;
            let out = json!({
                "measured": r.measured,
                "gcd_deg": r.gcd_deg,
                "stable": r.report.stable,
                "reference": r.report.reference,
                "history": r.report.history.iter().map(|h| h.codim).collect::<Vec<_>>(),
            });
            // Final verdict needs the fitted constant; see post_process.
            Ok((out, true))
        }
        Instance::QsepCount { field_q, q, m, .. } => {
            let r = qseparable_count_audit(*field_q, *q, *m)?;
            let out = json!({ "count": r.count, "total": r.total, "bound": r.bound() });
            Ok((out, r.pass()))
        }
        Instance::G2Roundtrip { tau, a, twist, corrupt, .. } => run_g2(tau, a, twist, *corrupt, ctx),
        Instance::HeisRoundtrip { t, tau, twist, extra, .. } => {
            let heis = Heis::new(ctx.cfg.m, f)?;
            let phi = StandardAutHeis::with_default_certificate(t.clone(), *tau, &heis)?;
            let mut samples = heis_sample_set(&heis);
            samples.extend(extra.iter().cloned());
            let pairs = twisted_heis_images(&heis, &phi, twist, &samples)?;
            let rec = heis_recover(&heis, &pairs)?;
            let truth: Vec<RatF> = samples.iter().map(|g| twist.apply(&g.v, f)).collect::<Result<_>>()?;
            let exact = rec.t == *t && rec.c_t == phi.c_t && rec.tau == *tau && rec.zeta == truth;
            let overlap = rec.overlap_checks > 0;
            let out = json!({ "exact": exact, "overlap_checks": rec.overlap_checks, "ambiguous": rec.ambiguous });
            Ok((out, exact && overlap && !rec.ambiguous))
        }
        Instance::HpRoundtrip { t, tau, twist, a_samples, psi_scale, psi_shift, .. } => {
            run_hp(t, tau, twist, a_samples, *psi_scale, *psi_shift, ctx)
        }
    }
}

fn twisted_heis_images(
    heis: &Heis,
    phi: &StandardAutHeis,
    twist: &LinearTwist,
    samples: &[HeisElem],
) -> Result<Vec<(HeisElem, HeisElem)>> {
    let f = heis.fld();
    samples
        .iter()
        .map(|g| {
            let z = HeisElem::central(twist.apply(&g.v, f)?, heis.m());
            Ok((g.clone(), heis.mul(&phi.apply(heis, g)?, &z)?))
        })
        .collect()
}

fn run_g2(tau: &FieldAut, a: &Pol, twist: &LinearTwist, corrupt: Corruption, ctx: &Ctx) -> Result<(Value, bool)> {
    let f = &ctx.f;
    let g2 = G2::from_form(ctx.form.clone());
    let phi = StandardAutG2::new(*tau, RatF::from_pol(a.clone()), Pol::one(), f)?;
    let basis = fp_monomial_basis(G2_BASIS_DEG, f);
    let nb = basis.len();
    let mut gens: Vec<G2Elem> = basis.iter().map(|b| G2Elem::from_pols(b.clone(), Pol::zero())).collect();
    let mut relations = Vec::new();
    for i in 0..nb - 1 {
        gens.push(g2.mul(&gens[i], &gens[i + 1]));
        relations.push((i, i + 1, nb + i));
    }
    let zeta: Vec<RatF> = gens.iter().map(|g| twist.apply(std::slice::from_ref(&g.y), f)).collect::<Result<_>>()?;
    let images: Vec<G2Elem> =
        gens.iter().zip(&zeta).map(|(g, z)| g2.mul(&phi.apply(&g2, g), &G2Elem::new(RatF::zero(), z.clone()))).collect();
    let mut deck = G2Deck { field: f.to_params(), e: ctx.cfg.e, generators: gens, images, relations };
    let recovered = match solve_g2(&deck) {
        Ok(sol) => {
            sol.recovery.a == RatF::from_pol(a.clone()) && sol.recovery.tau == *tau && !sol.recovery.ambiguous && sol.zeta == zeta
        }
        Err(_) => false,
    };
    match corrupt {
        Corruption::LinearImage { index } => {
            let y = deck.images[index].y.add(&RatF::from_pol(Pol::t_inv_pow(1)), f);
            deck.images[index].y = y;
        }
        Corruption::Relation { index } => {
            let z = deck.images[index].z.add(&RatF::one(), f);
            deck.images[index].z = z;
        }
    }
    let rejected = solve_g2(&deck).is_err();
    Ok((json!({ "recovered": recovered, "corrupted_rejected": rejected }), recovered && rejected))
}

fn run_hp(
    t: &RatMat,
    tau: &FieldAut,
    twist: &LinearTwist,
    a_samples: &[RatF],
    psi_scale: FqElem,
    psi_shift: usize,
    ctx: &Ctx,
) -> Result<(Value, bool)> {
    let f = &ctx.f;
    let m = ctx.cfg.m;
    let p = f.p() as usize;
    let heis = Heis::new(m, f)?;
    let hp = Hp::new(m, f)?;
    let phi = StandardAutHeis::with_default_certificate(t.clone(), *tau, &heis)?;
    let shift = RatF::from_pol(Pol::monomial(psi_scale, p * psi_shift));
    let psi = |z: &RatF| z.mul(&shift, f);
    let base = twisted_heis_images(&heis, &phi, twist, &heis_sample_set(&heis))?;
    // Mixed samples Fr(h)·a with images Fr(λ(h))·Ψ(a), plus pure A samples.
    let mut samples = Vec::new();
    for (j, (g, img)) in base.iter().enumerate() {
        let mut x = hp.frobenius_transport(&heis, g)?;
        let mut y = hp.frobenius_transport(&heis, img)?;
        if j % 2 == 1 {
            let a = &a_samples[j / 2 % a_samples.len()];
            x = hp.mul(&x, &HpElem::central(a.clone(), m))?;
            y = hp.mul(&y, &HpElem::central(psi(a), m))?;
        }
        samples.push((x, y));
    }
    for a in a_samples {
        samples.push((HpElem::central(a.clone(), m), HpElem::central(psi(a), m)));
    }
    let deck = HpDeck { field: f.to_params(), m, samples };
    let sol = solve_hp(&deck)?;
    let params = sol.recovery.heis.t == *t && sol.recovery.heis.tau == *tau;
    let out = json!({ "reproduced": sol.reproduced, "total": sol.total, "parameters_match": params });
    Ok((out, params && sol.reproduced == sol.total))
}

/// Cross-instance steps: the gcd suite fits C and then judges each record.
pub(super) fn post_process(suite: SuiteName, records: &mut [InstanceRecord], ctx: &Ctx) -> BTreeMap<String, i64> {
    let mut fitted = BTreeMap::new();
    if suite != SuiteName::GcdBounds {
        return fitted;
    }
    let samples: Vec<(usize, usize)> = records
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| (r.output["measured"].as_u64().unwrap_or(0) as usize, r.output["gcd_deg"].as_u64().unwrap_or(0) as usize))
        .collect();
    let d = ctx.f.d() as usize;
    let fit = fit_gcd_constant(&samples, d);
    let c = fit.c as i64;
    for r in records.iter_mut().filter(|r| r.error.is_none()) {
        let m = r.output["measured"].as_i64().unwrap_or(0);
        let g = r.output["gcd_deg"].as_i64().unwrap_or(0);
        let lower = d as i64 * g - c <= m;
        let upper = m <= c * g + c;
        r.output["lower_ok"] = lower.into();
        r.output["upper_ok"] = upper.into();
        r.pass = lower && upper;
    }
    fitted.insert("gcd_c".into(), c);
    fitted.insert("gcd_lower_ok".into(), fit.lower_ok as i64);
    fitted.insert("gcd_upper_ok".into(), fit.upper_ok as i64);
    fitted
}
