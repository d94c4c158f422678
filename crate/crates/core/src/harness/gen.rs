//! Random instance building blocks. Everything takes the RNG explicitly so a
//! per-instance seed fixes the instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpspace::TailSubspaceSpec;
use crate::fq::{FqElem, FqField, GaloisElement};
use crate::groups::linalg::{self, RatMat};
use crate::groups::{G2Elem, HeisElem, HpElem, SymplecticForm};
use crate::poly::{FieldAut, Pol, RatF};

/// Rejection loops give up after this many draws.
const MAX_TRIES: usize = 10_000;

pub fn instance_rng(base: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base.wrapping_add(index as u64))
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R, f: &FqField) -> FqElem {
    FqElem::from_index(rng.gen_range(1..f.q()))
}

pub fn scalar<R: Rng>(rng: &mut R, f: &FqField) -> FqElem {
    FqElem::from_index(rng.gen_range(0..f.q()))
}

/// Polynomial of exact degree `deg` with random lower coefficients.
pub fn pol_of_degree<R: Rng>(rng: &mut R, deg: usize, f: &FqField) -> Pol {
    let mut c: Vec<FqElem> = (0..deg).map(|_| scalar(rng, f)).collect();
    c.push(nonzero_scalar(rng, f));
    Pol::from_coeffs(c)
}

/// Polynomial with exact degree drawn from `degs`.
pub fn pol_deg_in<R: Rng>(rng: &mut R, degs: std::ops::Range<usize>, f: &FqField) -> Pol {
    let deg = rng.gen_range(degs);
    pol_of_degree(rng, deg, f)
}

/// Possibly zero polynomial of degree ≤ `max`.
pub fn pol_upto<R: Rng>(rng: &mut R, max: usize, f: &FqField) -> Pol {
    Pol::from_coeffs((0..=max).map(|_| scalar(rng, f)).collect())
}

pub fn ratf<R: Rng>(rng: &mut R, f: &FqField) -> RatF {
    let num = pol_upto(rng, 3, f);
    let den = pol_deg_in(rng, 0..3, f);
    RatF::new(num, den, f).expect("denominator is nonzero")
}

pub fn field_aut<R: Rng>(rng: &mut R, f: &FqField) -> FieldAut {
    let sigma = GaloisElement { power: rng.gen_range(0..f.d()) };
    FieldAut::new(sigma, nonzero_scalar(rng, f), scalar(rng, f)).expect("alpha is nonzero")
}

/// k independent random constraints on the coefficients of degree ≤ depth.
pub fn tail_spec<R: Rng>(rng: &mut R, k: usize, depth: usize, f: &FqField) -> Result<TailSubspaceSpec> {
    let width = f.d() as usize * (depth + 1);
    if k > width {
        return Err(Error::Parameter(format!("k = {k} constraints need depth D with d(D+1) >= k")));
    }
    for _ in 0..MAX_TRIES {
        let rows: Vec<Vec<u8>> =
            (0..k).map(|_| (0..width).map(|_| rng.gen_range(0..f.p()) as u8).collect()).collect();
        if let Ok(spec) = TailSubspaceSpec::new(depth, rows, f) {
            return Ok(spec);
        }
    }
    Err(Error::Resource("could not draw independent constraints".into()))
}

/// Draws until `accept` holds.
pub fn draw_until<R: Rng, T>(rng: &mut R, mut draw: impl FnMut(&mut R) -> T, accept: impl Fn(&T) -> bool) -> Result<T> {
    for _ in 0..MAX_TRIES {
        let x = draw(rng);
        if accept(&x) {
            return Ok(x);
        }
    }
    Err(Error::Resource("rejection sampling did not find an instance".into()))
}

/// A conformally symplectic matrix: a product of symplectic transvections
/// v ↦ v + c⟨u,v⟩u with polynomial u, times a polynomial scalar.
pub fn conformal_matrix<R: Rng>(rng: &mut R, m: usize, f: &FqField) -> RatMat {
    let form = SymplecticForm { m };
    let n = form.dim();
    let mut t = linalg::identity(n);
    for _ in 0..rng.gen_range(1..4) {
        let u: Vec<RatF> = (0..n).map(|_| RatF::from_pol(pol_upto(rng, 1, f))).collect();
        let c = RatF::constant(nonzero_scalar(rng, f));
        // Row i, column j: δᵢⱼ + c uᵢ ⟨u, eⱼ⟩.
        let tr: RatMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let uj = (0..n).fold(RatF::zero(), |acc, k| match form.entry(k, j) {
                            1 => acc.add(&u[k], f),
                            -1 => acc.sub(&u[k], f),
                            _ => acc,
                        });
                        let x = c.mul(&u[i], f).mul(&uj, f);
                        if i == j {
                            x.add(&RatF::one(), f)
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        t = linalg::mat_mul(&tr, &t, f);
    }
    let s = RatF::from_pol(pol_deg_in(rng, 0..2, f));
    linalg::mat_mul(&linalg::scalar_matrix(&s, n), &t, f)
}

/// An F_p-linear map from tuples of polynomials of degree ≤ `deg` to F,
/// given by one weight per (coordinate, degree, F_p-coordinate).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTwist {
    pub arity: usize,
    pub deg: usize,
    pub weights: Vec<Pol>,
}

impl LinearTwist {
    pub fn zero(arity: usize, deg: usize, f: &FqField) -> Self {
        LinearTwist { arity, deg, weights: vec![Pol::zero(); arity * (deg + 1) * f.d() as usize] }
    }

    pub fn random<R: Rng>(rng: &mut R, arity: usize, deg: usize, f: &FqField) -> Self {
        let n = arity * (deg + 1) * f.d() as usize;
        LinearTwist { arity, deg, weights: (0..n).map(|_| pol_upto(rng, 2, f)).collect() }
    }

    pub fn apply(&self, xs: &[RatF], f: &FqField) -> Result<RatF> {
        let d = f.d() as usize;
        if xs.len() != self.arity {
            return Err(Error::Parameter(format!("twist expects {} coordinates", self.arity)));
        }
        let mut acc = Pol::zero();
        for (c, x) in xs.iter().enumerate() {
            let p = x
                .as_pol()
                .filter(|p| p.deg_minus().is_none_or(|dg| dg <= self.deg))
                .ok_or_else(|| Error::Domain(format!("twist is defined on polynomials of degree <= {}", self.deg)))?;
            for (i, &a) in p.coeffs().iter().enumerate() {
                for (r, &digit) in f.coords(a).iter().enumerate() {
                    let w = &self.weights[(c * (self.deg + 1) + i) * d + r];
                    acc = acc.add(&w.scale(f.from_int(digit as i64), f), f);
                }
            }
        }
        Ok(RatF::from_pol(acc))
    }
}

pub fn g2_elem<R: Rng>(rng: &mut R, f: &FqField) -> G2Elem {
    G2Elem::new(ratf(rng, f), ratf(rng, f))
}

pub fn heis_elem<R: Rng>(rng: &mut R, m: usize, f: &FqField) -> HeisElem {
    HeisElem::new((0..2 * m).map(|_| ratf(rng, f)).collect(), ratf(rng, f))
}

pub fn hp_elem<R: Rng>(rng: &mut R, m: usize, f: &FqField) -> HpElem {
    HpElem { x: (0..m).map(|_| ratf(rng, f)).collect(), y: (0..m).map(|_| ratf(rng, f)).collect(), z: ratf(rng, f) }
}

/// Heisenberg element with polynomial coordinates of degree ≤ deg.
pub fn heis_pol_elem<R: Rng>(rng: &mut R, m: usize, deg: usize, f: &FqField) -> HeisElem {
    HeisElem::new((0..2 * m).map(|_| RatF::from_pol(pol_upto(rng, deg, f))).collect(), RatF::zero())
}
