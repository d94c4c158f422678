use proptest::prelude::*;

use super::linalg::{self, RatMat};
use super::*;
use crate::fq::{FqElem, GaloisElement};

fn f3() -> FqField {
    FqField::new(3, 1).unwrap()
}

fn rp(f: &FqField, c: &[i64]) -> RatF {
    RatF::from_pol(Pol::from_ints(f, c))
}

fn g2_matrix(g: &G2Elem, e: u64, f: &FqField) -> RatMat {
    vec![
        vec![RatF::one(), g.y.pow(e, f), g.z.clone()],
        vec![RatF::zero(), RatF::one(), g.y.clone()],
        vec![RatF::zero(), RatF::zero(), RatF::one()],
    ]
}

fn from_g2_matrix(a: &RatMat) -> G2Elem {
    G2Elem { y: a[1][2].clone(), z: a[0][2].clone() }
}

#[test]
fn g2_examples() {
    let f = f3();
    let g2 = G2::new(3, &f).unwrap();
    let g = G2Elem::from_pols(Pol::t_inv_pow(1), Pol::zero());
    assert_eq!(g2.mul(&g, &G2Elem::identity()), g);
    assert_eq!(g2.mul(&g, &g), G2Elem::new(rp(&f, &[0, 2]), rp(&f, &[0, 0, 0, 0, 1])));
    let h = G2Elem::from_pols(Pol::t_inv_pow(2), Pol::zero());
    let c = g2.commutator(&g, &h);
    assert_eq!(c, G2Elem::new(RatF::zero(), rp(&f, &[0, 0, 0, 0, 0, 1, 0, -1])));
    assert_eq!(g2.commutator(&g, &g), G2Elem::identity());
    let gz = G2Elem::new(rp(&f, &[1, 1]), rp(&f, &[2, 0, 1]));
    let inv = g2.inv(&gz);
    assert_eq!(inv.z, gz.y.pow(4, &f).sub(&gz.z, &f));
    assert_eq!(g2.mul(&gz, &inv), G2Elem::identity());
}

#[test]
fn g2_standard_examples() {
    let f = f3();
    let g2 = G2::new(3, &f).unwrap();
    let g = G2Elem::from_pols(Pol::one(), Pol::zero());
    let id = StandardAutG2::identity();
    assert_eq!(id.apply(&g2, &g), g);
    let a = rp(&f, &[0, 1]);
    let phi = StandardAutG2::new(FieldAut::identity(), a.clone(), Pol::one(), &f).unwrap();
    assert_eq!(phi.apply(&g2, &g), G2Elem::new(a, RatF::zero()));

    let tau = FieldAut::new(GaloisElement { power: 0 }, FqElem::ONE, FqElem::ONE).unwrap();
    let phi = StandardAutG2::new(tau, rp(&f, &[0, 1]), Pol::one(), &f).unwrap();
    let g = G2Elem::from_pols(Pol::t_inv_pow(1), Pol::zero());
    let h = G2Elem::from_pols(Pol::t_inv_pow(2), Pol::zero());
    assert_eq!(phi.apply(&g2, &g2.mul(&g, &h)), g2.mul(&phi.apply(&g2, &g), &phi.apply(&g2, &h)));
}

#[test]
fn standard_aut_needs_certificate() {
    let f = f3();
    let a = RatF::new(Pol::one(), Pol::from_ints(&f, &[1, 1]), &f).unwrap();
    assert!(StandardAutG2::new(FieldAut::identity(), a.clone(), Pol::one(), &f).is_err());
    assert!(StandardAutG2::new(FieldAut::identity(), a, Pol::from_ints(&f, &[1, 1]), &f).is_ok());
    assert!(StandardAutG2::new(FieldAut::identity(), RatF::zero(), Pol::one(), &f).is_err());
}

#[test]
fn lattice_examples() {
    let f = f3();
    let u = Pol::from_ints(&f, &[1, 1]);
    let x = RatF::new(Pol::t_inv_pow(1), u.clone(), &f).unwrap();
    assert!(lattice_member(&[rp(&f, &[1, 2])], &Pol::one(), &f).unwrap());
    assert!(lattice_member(&[x.clone()], &u, &f).unwrap());
    assert!(!lattice_member(&[x], &Pol::one(), &f).unwrap());
    assert!(lattice_member(&[], &Pol::zero(), &f).is_err());
}

#[test]
fn g2_center() {
    let f = f3();
    let g2 = G2::new(3, &f).unwrap();
    let gens = [G2Elem::from_pols(Pol::one(), Pol::zero()), G2Elem::from_pols(Pol::t_inv_pow(1), Pol::zero())];
    let commutes = |g: &G2Elem| gens.iter().all(|h| g2.mul(g, h) == g2.mul(h, g));
    assert!(commutes(&G2Elem::from_pols(Pol::zero(), Pol::t_inv_pow(3))));
    assert!(!commutes(&G2Elem::from_pols(Pol::t_inv_pow(2), Pol::zero())));
    assert!(!commutes(&G2Elem::from_pols(Pol::one(), Pol::zero())));
}

/// Heisenberg element in the (m+2)×(m+2) picture: x = v_a, y = 2v_b,
/// corner z + v_a·v_b.
fn heis_matrix(g: &HeisElem, m: usize, f: &FqField) -> RatMat {
    let mut a = linalg::identity(m + 2);
    let mut corner = g.z.clone();
    for i in 0..m {
        a[0][i + 1] = g.v[i].clone();
        a[i + 1][m + 1] = g.v[m + i].scale(f.from_int(2), f);
        corner = corner.add(&g.v[i].mul(&g.v[m + i], f), f);
    }
    a[0][m + 1] = corner;
    a
}

fn hp_matrix(g: &HpElem, m: usize, f: &FqField) -> RatMat {
    let p = f.p() as u64;
    let mut a = linalg::identity(m + 2);
    for i in 0..m {
        a[0][i + 1] = g.x[i].pow(p, f);
        a[i + 1][m + 1] = g.y[i].pow(p, f);
    }
    a[0][m + 1] = g.z.clone();
    a
}

fn arb_ratf(q: u32) -> impl Strategy<Value = RatF> {
    (proptest::collection::vec(0..q, 0..4), proptest::collection::vec(0..q, 0..2)).prop_map(move |(n, d)| {
        let f = FqField::from_q(q).unwrap();
        let mut d: Vec<FqElem> = d.into_iter().map(FqElem::from_index).collect();
        d.push(FqElem::ONE);
        RatF::new(Pol::from_coeffs(n.into_iter().map(FqElem::from_index).collect()), Pol::from_coeffs(d), &f).unwrap()
    })
}

fn arb_g2(q: u32) -> impl Strategy<Value = G2Elem> {
    (arb_ratf(q), arb_ratf(q)).prop_map(|(y, z)| G2Elem { y, z })
}

fn arb_heis(q: u32, m: usize) -> impl Strategy<Value = HeisElem> {
    (proptest::collection::vec(arb_ratf(q), 2 * m), arb_ratf(q)).prop_map(|(v, z)| HeisElem { v, z })
}

fn arb_hp(q: u32, m: usize) -> impl Strategy<Value = HpElem> {
    (proptest::collection::vec(arb_ratf(q), m), proptest::collection::vec(arb_ratf(q), m), arb_ratf(q))
        .prop_map(|(x, y, z)| HpElem { x, y, z })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g2_matches_matrices(g in arb_g2(9), h in arb_g2(9), k in arb_g2(9)) {
        let f = FqField::from_q(9).unwrap();
        let g2 = G2::new(3, &f).unwrap();
        let prod = linalg::mat_mul(&g2_matrix(&g, 3, &f), &g2_matrix(&h, 3, &f), &f);
        prop_assert_eq!(g2.mul(&g, &h), from_g2_matrix(&prod));
        prop_assert_eq!(g2.mul(&g2.mul(&g, &h), &k), g2.mul(&g, &g2.mul(&h, &k)));
        prop_assert_eq!(g2.mul(&g, &g2.inv(&g)), G2Elem::identity());
        let c = g2.commutator(&g, &h);
        prop_assert!(c.is_central());
        if g.y.is_pol() && h.y.is_pol() {
            prop_assert_eq!(c.z, RatF::from_pol(g2.form().bracket(g.y.num(), h.y.num())));
        }
    }

    #[test]
    fn heis_matches_matrices(g in arb_heis(3, 2), h in arb_heis(3, 2), k in arb_heis(3, 2)) {
        let f = f3();
        let heis = Heis::new(2, &f).unwrap();
        let gh = heis.mul(&g, &h).unwrap();
        let prod = linalg::mat_mul(&heis_matrix(&g, 2, &f), &heis_matrix(&h, 2, &f), &f);
        prop_assert_eq!(heis_matrix(&gh, 2, &f), prod);
        prop_assert_eq!(heis.mul(&gh, &k).unwrap(), heis.mul(&g, &heis.mul(&h, &k).unwrap()).unwrap());
        let c = heis.commutator(&g, &h).unwrap();
        let two = f.from_int(2);
        prop_assert_eq!(c, HeisElem::central(heis.form().pair(&g.v, &h.v, &f).scale(two, &f), 2));
    }

    #[test]
    fn hp_matches_matrices_and_transport(g in arb_heis(3, 1), h in arb_heis(3, 1), a in arb_hp(3, 1), b in arb_hp(3, 1)) {
        let f = f3();
        let heis = Heis::new(1, &f).unwrap();
        let hp = Hp::new(1, &f).unwrap();
        let ab = hp.mul(&a, &b).unwrap();
        prop_assert_eq!(hp_matrix(&ab, 1, &f), linalg::mat_mul(&hp_matrix(&a, 1, &f), &hp_matrix(&b, 1, &f), &f));
        prop_assert_eq!(hp.mul(&a, &hp.inv(&a).unwrap()).unwrap(), hp.identity());
        let (a1, a2) = hp.decompose(&a).unwrap();
        prop_assert_eq!(hp.mul(&a1, &a2).unwrap(), a.clone());
        let fg = hp.frobenius_transport(&heis, &g).unwrap();
        let fh = hp.frobenius_transport(&heis, &h).unwrap();
        prop_assert!(hp.in_h_prime(&fg));
        prop_assert_eq!(hp.frobenius_transport(&heis, &heis.mul(&g, &h).unwrap()).unwrap(), hp.mul(&fg, &fh).unwrap());
        prop_assert_eq!(hp.frobenius_untransport(&heis, &fg).unwrap(), g);
    }

    #[test]
    fn g2_standard_is_invertible_homomorphism(
        g in arb_g2(9), h in arb_g2(9), a in arb_ratf(9),
        s in 0u32..2, al in 1u32..9, be in 0u32..9,
    ) {
        prop_assume!(!a.is_zero());
        let f = FqField::from_q(9).unwrap();
        let g2 = G2::new(3, &f).unwrap();
        let tau = FieldAut::new(GaloisElement { power: s }, FqElem::from_index(al), FqElem::from_index(be)).unwrap();
        let phi = StandardAutG2::with_default_certificate(tau, a, &f).unwrap();
        prop_assert_eq!(phi.apply(&g2, &g2.mul(&g, &h)), g2.mul(&phi.apply(&g2, &g), &phi.apply(&g2, &h)));
        let back = phi.inverse(&f).unwrap();
        prop_assert_eq!(back.apply(&g2, &phi.apply(&g2, &g)), g.clone());
        let comp = phi.then(&back, &f).unwrap();
        prop_assert_eq!(comp.apply(&g2, &g), g);
    }

    #[test]
    fn heis_standard_is_homomorphism(
        g in arb_heis(9, 1), h in arb_heis(9, 1),
        t00 in arb_ratf(9), t01 in arb_ratf(9), t10 in arb_ratf(9), t11 in arb_ratf(9),
        s in 0u32..2, al in 1u32..9, be in 0u32..9,
    ) {
        let f = FqField::from_q(9).unwrap();
        let heis = Heis::new(1, &f).unwrap();
        // Every invertible 2×2 matrix is conformal for m = 1.
        let t = vec![vec![t00, t01], vec![t10, t11]];
        prop_assume!(!linalg::det(&t, &f).unwrap().is_zero());
        let tau = FieldAut::new(GaloisElement { power: s }, FqElem::from_index(al), FqElem::from_index(be)).unwrap();
        let phi = StandardAutHeis::with_default_certificate(t.clone(), tau, &heis).unwrap();
        prop_assert_eq!(phi.c_t.clone(), linalg::det(&t, &f).unwrap());
        let lhs = phi.apply(&heis, &heis.mul(&g, &h).unwrap()).unwrap();
        let rhs = heis.mul(&phi.apply(&heis, &g).unwrap(), &phi.apply(&heis, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
