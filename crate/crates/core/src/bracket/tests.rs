use proptest::prelude::*;

use super::*;
use crate::fpspace::span_pols;
use crate::poly::max_eth_power_divisor_degree;

fn f3() -> FqField {
    FqField::new(3, 1).unwrap()
}

fn form3() -> BracketForm {
    BracketForm::new(3, &f3()).unwrap()
}

fn ints(c: &[i64]) -> Pol {
    Pol::from_ints(&f3(), c)
}

/// Coefficient-list bracket without the sparse kernel.
fn naive_bracket(a: &[i64], b: &[i64], e: usize, p: i64) -> Vec<i64> {
    fn mul(x: &[i64], y: &[i64], p: i64) -> Vec<i64> {
        let mut out = vec![0; x.len() + y.len()];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b).rem_euclid(p);
            }
        }
        out
    }
    let pw = |x: &[i64]| (1..e).fold(x.to_vec(), |acc, _| mul(&acc, x, p));
    let l = mul(&pw(a), b, p);
    let r = mul(a, &pw(b), p);
    let n = l.len().max(r.len());
    let mut out: Vec<i64> = (0..n)
        .map(|i| (l.get(i).copied().unwrap_or(0) - r.get(i).copied().unwrap_or(0)).rem_euclid(p))
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

#[test]
fn bracket_small_values() {
    let form = form3();
    let a = Pol::t_inv_pow(1);
    let b = Pol::t_inv_pow(2);
    assert_eq!(form.bracket(&a, &b), ints(&[0, 0, 0, 0, 0, 1, 0, -1]));
    assert!(form.bracket(&a, &a).is_zero());
    assert!(form.bracket(&a, &Pol::zero()).is_zero());
    assert!(BracketForm::new(1, &f3()).unwrap().bracket(&a, &b).is_zero());
}

#[test]
fn bracket_matches_naive_expansion() {
    let f = f3();
    let form = form3();
    let samples: [&[i64]; 5] = [&[1], &[0, 1], &[2, 0, 1], &[1, 1, 1, 2], &[0, 0, 2, 1]];
    for a in samples {
        for b in samples {
            let want = Pol::from_ints(&f, &naive_bracket(a, b, 3, 3));
            assert_eq!(form.bracket(&Pol::from_ints(&f, a), &Pol::from_ints(&f, b)), want);
        }
    }
}

#[test]
fn form_parameters() {
    assert!(BracketForm::new(2, &f3()).is_err());
    assert!(matches!(form3().require_e_gt_2(), Ok(())));
    let f2 = FqField::new(2, 1).unwrap();
    assert!(matches!(BracketForm::new(2, &f2).unwrap().require_e_gt_2(), Err(Error::Unsupported(_))));
    assert!(BracketForm::new(1, &f3()).unwrap().is_degenerate());
}

#[test]
fn power_coset_examples() {
    let f = f3();
    let w = Window::new(3, &f).unwrap();
    let s = power_coset_space(&Pol::one(), 3, &w).unwrap();
    assert_eq!(s.dim(), 2);
    assert!(s.contains_pol(&Pol::t_inv_pow(3)));
    assert!(!s.contains_pol(&Pol::t_inv_pow(1)));
    assert_eq!(power_coset_space(&Pol::one(), 1, &w).unwrap().codim_in_window(), 0);
    assert!(matches!(power_coset_space(&Pol::zero(), 3, &w), Err(Error::Domain(_))));
    assert!(matches!(power_coset_space(&Pol::t_inv_pow(4), 3, &w), Err(Error::Window(_))));
}

#[test]
fn power_coset_over_extension_field() {
    let f = FqField::new(3, 2).unwrap();
    let w = Window::new(7, &f).unwrap();
    let a = Pol::t_inv_pow(1);
    let s = power_coset_space(&a, 3, &w).unwrap();
    // a·γ³·t^(-3j) for j = 0, 1, 2 and γ³ ranging over F_9.
    assert_eq!(s.dim(), 6);
    for g in f.elements() {
        assert!(s.contains_pol(&a.mul(&Pol::monomial(f.pow(g, 3), 3), &f)));
    }
}

#[test]
fn bracket_space_examples() {
    let f = f3();
    let form = form3();
    let w1 = Window::new(1, &f).unwrap();
    let u = span_pols(&[Pol::one(), Pol::t_inv_pow(1)], &w1).unwrap();
    let out = Window::new(4, &f).unwrap();
    let s = bracket_space(&u, &u, &form, &out).unwrap();
    assert_eq!(s.dim(), 1);
    assert!(s.contains_pol(&ints(&[0, 1, 0, -1])));

    let zero = FpSubspace::zero(&w1);
    assert_eq!(bracket_space(&zero, &u, &form, &out).unwrap().dim(), 0);
    let ones = span_pols(&[Pol::one()], &Window::new(0, &f).unwrap()).unwrap();
    assert_eq!(bracket_space(&ones, &ones, &form, &out).unwrap().dim(), 0);
    let small = Window::new(3, &f).unwrap();
    assert!(matches!(bracket_space(&u, &u, &form, &small), Err(Error::Window(_))));
}

#[test]
fn schedule_rules() {
    assert!(Schedule::default_for(3, 0, false).validate(3).is_ok());
    assert!(Schedule::default_for(3, 1, true).validate(3).is_ok());
    assert!(Schedule::new(&[(6, 96)]).validate(3).is_err());
    assert!(Schedule::new(&[(6, 20), (9, 200)]).validate(3).is_err());
    assert!(Schedule::new(&[(9, 200), (6, 96)]).validate(3).is_err());
    assert_eq!(Schedule::parse("6:96, 9:144").unwrap(), Schedule::new(&[(6, 96), (9, 144)]));
    assert!(Schedule::parse("6-96").is_err());
}

fn full_window_problem() -> CodimProblem {
    CodimProblem {
        spec: TailSubspaceSpec::full(),
        summands: vec![Summand::Space(Arg::V)],
        relative: false,
        witness: None,
    }
}

#[test]
fn full_space_has_codim_zero() {
    let r = stabilized_codim(&full_window_problem(), &form3(), &Schedule::new(&[(4, 16), (6, 24)])).unwrap();
    assert_eq!(r.codim, 0);
    assert!(r.stable);
}

#[test]
fn single_bracket_space_is_not_stable() {
    let problem = CodimProblem {
        spec: TailSubspaceSpec::full(),
        summands: vec![Summand::Bracket(Arg::Elem(Pol::t_inv_pow(1)), Arg::V)],
        relative: false,
        witness: None,
    };
    let r = stabilized_codim(&problem, &form3(), &Schedule::new(&[(6, 96), (9, 144)])).unwrap();
    assert!(!r.stable);
    assert!(r.history[1].codim > r.history[0].codim);
}

#[test]
fn ideal_witness_example() {
    let f = f3();
    let form = form3();
    let c = Pol::t_inv_pow(1);
    let w = Window::new(30, &f).unwrap();
    let (b, ok) = ideal_witness(&Pol::one(), &c, 3, &form, &w).unwrap();
    assert_eq!(b, ints(&[0, -1, 0, 0, 0, 0, 0, 0, 0, 1]));
    assert_eq!(b.deg_minus(), Some(9));
    assert!(ok);
    assert!(matches!(ideal_witness(&Pol::one(), &Pol::constant(FqElem::ONE), 3, &form, &w), Err(Error::Domain(_))));
    assert!(ideal_witness(&Pol::one(), &c, 2, &form, &w).is_err());
}

#[test]
fn ideal_containment_small() {
    let f = f3();
    let form = form3();
    let spec = TailSubspaceSpec::full();
    assert!(ideal_containment(&Pol::one(), &Pol::t_inv_pow(1), 3, &spec, &form, 12).unwrap());
    let a = ints(&[1, 1]);
    assert!(ideal_containment(&a, &ints(&[0, 1, 1]), 3, &spec, &form, 14).unwrap());
    let _ = f;
}

#[test]
fn codim_formula_s_values() {
    let f = f3();
    assert_eq!(max_eth_power_divisor_degree(&Pol::t_inv_pow(3), 3, &f).unwrap(), 1);
    assert_eq!(max_eth_power_divisor_degree(&Pol::t_inv_pow(1), 3, &f).unwrap(), 0);
}

#[test]
fn codim_formula_for_unit() {
    let r = codim_formula_audit(
        &Pol::one(),
        &TailSubspaceSpec::full(),
        3,
        &form3(),
        &Schedule::new(&[(6, 96), (9, 144)]),
    )
    .unwrap();
    assert_eq!((r.main_term, r.s, r.bound), (0, 0, 9));
    assert!(r.pass, "{r:?}");
    assert!(r.report.stable);
}

#[test]
fn codim_formula_refuses_non_members() {
    let f = f3();
    let spec = TailSubspaceSpec::new(0, vec![vec![1]], &f).unwrap();
    let r = codim_formula_audit(&Pol::one(), &spec, 3, &form3(), &Schedule::new(&[(6, 96), (9, 144)]));
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn prop_ab_examples() {
    let form = form3();
    let spec = TailSubspaceSpec::full();
    let sched = Schedule::new(&[(10, 100), (12, 120)]);
    let a = ints(&[1, 1]);
    let b = a.mul(&Pol::t_inv_pow(3), &f3());
    let r = prop_ab_audit(&a, &b, &spec, &form, &sched).unwrap();
    assert!(r.predicted && r.measured, "{r:?}");
    let r = prop_ab_audit(&Pol::t_inv_pow(1), &Pol::t_inv_pow(2), &spec, &form, &sched).unwrap();
    assert!(!r.predicted && !r.measured, "{r:?}");
    let a = Pol::t_inv_pow(1);
    assert!(matches!(prop_ab_audit(&a, &a, &spec, &form, &sched), Err(Error::Hypothesis(_))));
}

#[test]
fn frobenius_monotonicity_examples() {
    let form = form3();
    let sched = Schedule::new(&[(2, 8), (3, 40)]);
    assert!(frobenius_monotonicity_audit(&Pol::t_inv_pow(1), 1, &form, &sched).unwrap());
    assert!(frobenius_monotonicity_audit(&Pol::t_inv_pow(1), 0, &form, &sched).unwrap());
    assert!(frobenius_monotonicity_audit(&Pol::one(), 1, &form, &sched).unwrap());
    assert!(frobenius_monotonicity_audit(&ints(&[2, 1, 1]), 2, &form, &sched).unwrap());
}

#[test]
fn gcd_codim_examples() {
    let f = f3();
    let form = form3();
    let spec = TailSubspaceSpec::full();
    let sched = Schedule::new(&[(6, 96), (9, 144)]);
    let a = ints(&[1, 1]);
    let g = gcd_codim_audit(&a, &a, &spec, 3, &form, &sched).unwrap();
    assert_eq!(g.gcd_deg, 1);
    let u = ints(&[1, 1]);
    let v = ints(&[2, 1]);
    let t = Pol::t_inv_pow(1);
    let g = gcd_codim_audit(&t.mul(&u, &f), &t.mul(&v, &f), &spec, 3, &form, &sched).unwrap();
    assert_eq!(g.gcd_deg, 1);
    let g = gcd_codim_audit(&u, &v, &spec, 3, &form, &sched).unwrap();
    assert_eq!(g.gcd_deg, 0);
}

#[test]
fn gcd_fit_rules() {
    let fit = fit_gcd_constant(&[(3, 0), (7, 2), (2, 1)], 1);
    assert_eq!(fit.c, 4);
    assert_eq!((fit.upper_ok, fit.lower_ok, fit.total), (3, 3, 3));
}

/// Non-separability by searching for c^Q | a over all monic c.
fn qsep_oracle(q: u32, qq: u64, m: usize) -> u64 {
    let f = FqField::from_q(q).unwrap();
    let monics = |deg: usize| -> Vec<Pol> {
        let n = (q as u64).pow(deg as u32);
        (0..n)
            .map(|i| {
                let mut c: Vec<FqElem> = (0..deg)
                    .map(|j| FqElem::from_index(((i / (q as u64).pow(j as u32)) % q as u64) as u32))
                    .collect();
                c.push(FqElem::ONE);
                Pol::from_coeffs(c)
            })
            .collect()
    };
    let powers: Vec<Pol> = (1..=m / qq as usize).flat_map(monics).map(|c| c.pow(qq, &f)).collect();
    let bad = monics(m).iter().filter(|a| powers.iter().any(|cq| cq.divides(a, &f))).count() as u64;
    bad * (q as u64 - 1)
}

#[test]
fn qseparable_examples() {
    let r = qseparable_count_audit(3, 9, 2).unwrap();
    assert_eq!(r.count, 0);
    // (t⁻¹)⁴ and (t⁻¹ + 1)⁴ over F_2.
    let r = qseparable_count_audit(2, 4, 4).unwrap();
    assert_eq!(r.count, 2);
    assert_eq!((r.bound_num, r.bound_den), (64, 7));
    assert!(r.pass());
    // c³·y with deg c = 1: 3 monic c, 2 units.
    let r = qseparable_count_audit(3, 3, 3).unwrap();
    assert_eq!(r.count, 6);
    assert!(matches!(qseparable_count_audit(3, 3, 20), Err(Error::Resource(_))));
    assert!(qseparable_count_audit(3, 4, 3).is_err());
}

#[test]
fn qseparable_matches_oracle() {
    for (q, qq) in [(2u32, 4u64), (2, 8), (3, 9), (3, 3), (4, 4)] {
        for m in 1..=6 {
            assert_eq!(qseparable_count_audit(q, qq, m).unwrap().count, qsep_oracle(q, qq, m), "q={q} Q={qq} m={m}");
        }
    }
}

fn arb_pol3(maxlen: usize) -> impl Strategy<Value = Pol> {
    proptest::collection::vec(0i64..3, 0..maxlen).prop_map(|c| Pol::from_ints(&f3(), &c))
}

proptest! {
    #[test]
    fn bracket_is_bilinear(a in arb_pol3(6), a2 in arb_pol3(6), b in arb_pol3(6), c in 0i64..3) {
        let f = f3();
        let form = form3();
        let lhs = form.bracket(&a.add(&a2, &f), &b);
        prop_assert_eq!(lhs, form.bracket(&a, &b).add(&form.bracket(&a2, &b), &f));
        let c = f.from_int(c);
        prop_assert_eq!(form.bracket(&a.scale(c, &f), &b), form.bracket(&a, &b).scale(c, &f));
    }

    #[test]
    fn bracket_is_alternating(a in arb_pol3(6), b in arb_pol3(6)) {
        let f = f3();
        let form = form3();
        prop_assert_eq!(form.bracket(&a, &b), form.bracket(&b, &a).neg(&f));
        prop_assert!(form.bracket(&a, &a).is_zero());
    }

    #[test]
    fn power_coset_closed_under_sums(a in arb_pol3(4), x in arb_pol3(4), y in arb_pol3(4)) {
        prop_assume!(!a.is_zero());
        let f = f3();
        let w = Window::new(24, &f).unwrap();
        let s = power_coset_space(&a, 3, &w).unwrap();
        let ax = a.mul(&x.pow_p_power(3, &f), &f);
        let ay = a.mul(&y.pow_p_power(3, &f), &f);
        prop_assert!(s.contains_pol(&ax.add(&ay, &f)));
    }

    #[test]
    fn ideal_identity_holds(a in arb_pol3(3), c0 in arb_pol3(3), cl in 1i64..3, y in arb_pol3(5)) {
        let f = f3();
        let c = c0.add(&Pol::monomial(f.from_int(cl), 3), &f);
        let form = form3();
        let qq = 9u64;
        let b = witness_b(&c, &form).unwrap();
        let lhs = form.bracket(&a.mul(&c.pow_p_power(qq, &f), &f), &y)
            .sub(&form.bracket(&a, &c.pow(qq / 3, &f).mul(&y, &f)), &f);
        prop_assert_eq!(lhs, a.pow_p_power(3, &f).mul(&b.pow(qq / 3, &f), &f).mul(&y, &f));
    }
}
