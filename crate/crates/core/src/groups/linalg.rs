//! Dense matrices over F_q(t) with exact fraction entries.

use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::RatF;

/// Row-major square or rectangular matrix.
pub type RatMat = Vec<Vec<RatF>>;

pub fn identity(n: usize) -> RatMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { RatF::one() } else { RatF::zero() }).collect()).collect()
}

pub fn scalar_matrix(c: &RatF, n: usize) -> RatMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { c.clone() } else { RatF::zero() }).collect()).collect()
}

pub fn mat_vec(a: &RatMat, v: &[RatF], f: &FqField) -> Vec<RatF> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(RatF::zero(), |acc, (x, y)| acc.add(&x.mul(y, f), f)))
        .collect()
}

pub fn mat_mul(a: &RatMat, b: &RatMat, f: &FqField) -> RatMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(RatF::zero(), |acc, (x, r)| acc.add(&x.mul(&r[j], f), f)))
                .collect()
        })
        .collect()
}

pub fn column(a: &RatMat, j: usize) -> Vec<RatF> {
    a.iter().map(|r| r[j].clone()).collect()
}

pub fn from_columns(cols: &[Vec<RatF>]) -> RatMat {
    let n = cols.first().map_or(0, |c| c.len());
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn check_square(a: &RatMat) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Parameter("matrix is not square".into()));
    }
    Ok(n)
}

pub fn det(a: &RatMat, f: &FqField) -> Result<RatF> {
    let n = check_square(a)?;
    let mut m = a.clone();
    let mut d = RatF::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Ok(RatF::zero());
        };
        if p != c {
            m.swap(p, c);
            d = d.neg(f);
        }
        let piv = m[c][c].clone();
        d = d.mul(&piv, f);
        let pinv = piv.inv(f)?;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let k = m[r][c].mul(&pinv, f);
            for j in c..n {
                let t = m[c][j].mul(&k, f);
                m[r][j] = m[r][j].sub(&t, f);
            }
        }
    }
    Ok(d)
}

/// Gauss-Jordan inverse; singular matrices give a domain error.
pub fn inverse(a: &RatMat, f: &FqField) -> Result<RatMat> {
    let n = check_square(a)?;
    let mut m = a.clone();
    let mut inv = identity(n);
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !m[r][c].is_zero())
            .ok_or_else(|| Error::Domain("singular matrix".into()))?;
        m.swap(p, c);
        inv.swap(p, c);
        let pinv = m[c][c].inv(f)?;
        for j in 0..n {
            m[c][j] = m[c][j].mul(&pinv, f);
            inv[c][j] = inv[c][j].mul(&pinv, f);
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let k = m[r][c].clone();
            for j in 0..n {
                let t = m[c][j].mul(&k, f);
                m[r][j] = m[r][j].sub(&t, f);
                let t = inv[c][j].mul(&k, f);
                inv[r][j] = inv[r][j].sub(&t, f);
            }
        }
    }
    Ok(inv)
}

/// Rank of a list of vectors over F_q(t).
pub fn rank(vectors: &[Vec<RatF>], f: &FqField) -> usize {
    let mut m: Vec<Vec<RatF>> = vectors.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let pinv = m[r][c].inv(f).expect("nonzero pivot");
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let k = m[i][c].mul(&pinv, f);
            for j in c..ncols {
                let t = m[r][j].mul(&k, f);
                m[i][j] = m[i][j].sub(&t, f);
            }
        }
        r += 1;
    }
    r
}
