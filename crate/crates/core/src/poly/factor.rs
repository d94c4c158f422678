//! Factorization over F_q: characteristic-p squarefree decomposition,
//! distinct-degree splitting and Cantor–Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField};
use super::{check_p_power, poly_gcd, Pol};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: FqElem,
    /// Monic irreducible factors with multiplicities, sorted.
    pub factors: Vec<(Pol, u32)>,
}

impl Factorization {
    pub fn product(&self, f: &FqField) -> Pol {
        self.factors
            .iter()
            .fold(Pol::constant(self.unit), |acc, (u, m)| acc.mul(&u.pow(*m as u64, f), f))
    }
}

const FACTOR_SEED: u64 = 0x5eed_f00d;

/// Factorization with a fixed internal seed.
pub fn factorize(a: &Pol, f: &FqField) -> Result<Factorization> {
    factorize_with_rng(a, f, &mut ChaCha8Rng::seed_from_u64(FACTOR_SEED))
}

pub fn factorize_with_rng<R: Rng>(a: &Pol, f: &FqField, rng: &mut R) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let unit = a.lead();
    let mut out: Vec<(Pol, u32)> = Vec::new();
    for (sq, mult) in squarefree(&a.monic(f), f) {
        for (g, deg) in distinct_degree(&sq, f) {
            for irr in equal_degree(&g, deg, f, rng)? {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    // Squarefree parts are coprime, so factors never repeat; merge defensively.
    let mut merged: Vec<(Pol, u32)> = Vec::new();
    for (u, m) in out {
        match merged.last_mut() {
            Some((v, n)) if *v == u => *n += m,
            _ => merged.push((u, m)),
        }
    }
    Ok(Factorization { unit, factors: merged })
}

/// Squarefree decomposition of a monic polynomial: pairs (s_i, i) with
/// each s_i squarefree, pairwise coprime, and a = Π s_i^i.
pub fn squarefree(a: &Pol, f: &FqField) -> Vec<(Pol, u32)> {
    let mut res = Vec::new();
    if a.deg_minus().unwrap_or(0) == 0 {
        return res;
    }
    let d = a.derivative(f);
    let mut c = poly_gcd(a, &d, f).expect("a nonzero");
    let mut w = a.div_exact(&c, f).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = poly_gcd(&w, &c, f).expect("w nonzero");
        let fac = w.div_exact(&y, f).expect("gcd divides");
        if !fac.is_one() {
            res.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w, f).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root(f).expect("remaining part is a p-th power");
        for (g, m) in squarefree(&root, f) {
            res.push((g, m * f.p()));
        }
    }
    res
}

/// Splits a monic squarefree polynomial into products of irreducibles of equal degree.
pub fn distinct_degree(a: &Pol, f: &FqField) -> Vec<(Pol, usize)> {
    let q = f.q() as u64;
    let x = Pol::t_inv_pow(1);
    let mut res = Vec::new();
    let mut g = a.clone();
    let mut h = x.rem(&g, f).unwrap();
    let mut i = 1usize;
    while g.deg_minus().unwrap_or(0) >= 2 * i {
        h = h.powmod(q, &g, f);
        let dd = poly_gcd(&g, &h.sub(&x, f), f).unwrap();
        if !dd.is_one() {
            g = g.div_exact(&dd, f).unwrap();
            h = h.rem(&g, f).unwrap();
            res.push((dd, i));
        }
        i += 1;
    }
    if g.deg_minus().unwrap_or(0) > 0 {
        let deg = g.deg_minus().unwrap();
        res.push((g, deg));
    }
    res
}

fn roots_exhaustive(g: &Pol, f: &FqField) -> Vec<Pol> {
    f.elements()
        .filter(|&c| g.eval(c, f).is_zero())
        .map(|c| Pol::from_coeffs(vec![f.neg(c), FqElem::ONE]))
        .collect()
}

/// Splits a monic squarefree product of irreducibles of degree `deg`.
pub fn equal_degree<R: Rng>(g: &Pol, deg: usize, f: &FqField, rng: &mut R) -> Result<Vec<Pol>> {
    let n = g.deg_minus().unwrap_or(0);
    if n == deg {
        return Ok(vec![g.clone()]);
    }
    if deg == 1 && f.q() <= 4096 {
        return Ok(roots_exhaustive(g, f));
    }
    let q = f.q() as u64;
    for _ in 0..256 {
        let r = Pol::from_coeffs((0..n).map(|_| FqElem::from_index(rng.gen_range(0..f.q()))).collect());
        if r.is_constant() {
            continue;
        }
        let b = if f.p() == 2 {
            // Absolute trace r + r^2 + ... + r^(2^(d*deg - 1)).
            let mut acc = r.clone();
            let mut cur = r.clone();
            for _ in 1..(f.d() as usize * deg) {
                cur = cur.mulmod(&cur, g, f);
                acc = acc.add(&cur, f);
            }
            acc
        } else {
            // r^((q^deg - 1)/2) = Π_j (r^((q-1)/2))^(q^j)
            let base = r.powmod((q - 1) / 2, g, f);
            let mut acc = base.clone();
            let mut cur = base;
            for _ in 1..deg {
                cur = cur.powmod(q, g, f);
                acc = acc.mulmod(&cur, g, f);
            }
            acc.sub(&Pol::one(), f)
        };
        let h = poly_gcd(g, &b, f)?;
        let hd = h.deg_minus().unwrap_or(0);
        if hd > 0 && hd < n {
            let other = g.div_exact(&h, f)?;
            let mut out = equal_degree(&h, deg, f, rng)?;
            out.extend(equal_degree(&other, deg, f, rng)?);
            return Ok(out);
        }
    }
    Err(Error::Resource(format!("equal-degree splitting did not converge for degree {n}")))
}

/// Q-separable: no irreducible factor has multiplicity >= Q.
pub fn is_q_separable(a: &Pol, qq: u64, f: &FqField) -> Result<bool> {
    check_p_power(qq, f)?;
    Ok(factorize(a, f)?.factors.iter().all(|(_, m)| (*m as u64) < qq))
}

/// Returns (a', c) with a = a'·c^Q, a' Q-separable and c monic.
pub fn q_separable_split(a: &Pol, qq: u64, f: &FqField) -> Result<(Pol, Pol)> {
    check_p_power(qq, f)?;
    let fac = factorize(a, f)?;
    let mut sep = Pol::constant(fac.unit);
    let mut c = Pol::one();
    for (u, m) in &fac.factors {
        let m = *m as u64;
        sep = sep.mul(&u.pow(m % qq, f), f);
        c = c.mul(&u.pow(m / qq, f), f);
    }
    Ok((sep, c))
}

/// max{deg⁻c : c^e | a}, as Σ floor(m_j / e)·deg u_j.
pub fn max_eth_power_divisor_degree(a: &Pol, e: u64, f: &FqField) -> Result<usize> {
    let fac = factorize(a, f)?;
    Ok(fac
        .factors
        .iter()
        .map(|(u, m)| (*m as u64 / e) as usize * u.deg_minus().unwrap())
        .sum())
}
