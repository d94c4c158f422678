//! F_p-linear algebra on the coefficient space of the degree ≤ N truncation of F⁻.
//!
//! A polynomial Σ α_i t^(-i) is embedded with the F_p-coordinates of α_i in
//! slots i·d .. i·d + d. Echelon forms pivot on the *highest* nonzero
//! coordinate, so the rows of a reduced basis whose pivot lies below a
//! degree bound span exactly the intersection with the smaller window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqField};
use crate::poly::Pol;

/// The degree ≤ n truncation of F⁻, as an F_p-space of dimension d(n+1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub n: usize,
    pub fld: FqField,
}

impl Window {
    pub fn new(n: usize, fld: &FqField) -> Result<Self> {
        if fld.p() > 255 {
            return Err(Error::Unsupported("F_p linear algebra needs p < 256".into()));
        }
        Ok(Window { n, fld: fld.clone() })
    }
    pub fn d(&self) -> usize {
        self.fld.d() as usize
    }
    pub fn dim(&self) -> usize {
        self.d() * (self.n + 1)
    }
    /// Number of coordinates used by degrees ≤ deg.
    pub fn cols_upto(&self, deg: usize) -> usize {
        self.d() * (deg + 1)
    }
}

pub fn embed(a: &Pol, w: &Window) -> Result<Vec<u8>> {
    let mut v = vec![0u8; w.dim()];
    embed_into(a, w, &mut v)?;
    Ok(v)
}

pub fn embed_into(a: &Pol, w: &Window, out: &mut [u8]) -> Result<()> {
    if let Some(deg) = a.deg_minus() {
        if deg > w.n {
            return Err(Error::Window(format!("degree {deg} exceeds window N = {}", w.n)));
        }
    }
    let d = w.d();
    for (i, &c) in a.coeffs().iter().enumerate() {
        w.fld.fp_coords_into(c, &mut out[i * d..i * d + d]);
    }
    Ok(())
}

pub fn unembed(v: &[u8], w: &Window) -> Pol {
    let d = w.d();
    let coeffs = v
        .chunks(d)
        .map(|c| w.fld.from_coords(&c.iter().map(|&x| x as u32).collect::<Vec<_>>()).unwrap())
        .collect::<Vec<FqElem>>();
    Pol::from_coeffs(coeffs)
}

fn fp_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero residue")
}

/// Reduction of s < p² modulo p.
#[derive(Clone, Copy, Debug)]
struct ModP {
    p: u32,
    magic: u32,
}

impl ModP {
    const SHIFT: u32 = 21;
    fn new(p: u32) -> Self {
        ModP { p, magic: ((1u64 << Self::SHIFT) / p as u64 + 1) as u32 }
    }
    /// v ← v + m·r (mod p) elementwise.
    #[inline]
    fn axpy(&self, v: &mut [u8], m: u8, r: &[u8]) {
        let p = self.p;
        if p < 128 {
            let magic = self.magic;
            for (x, &y) in v.iter_mut().zip(r) {
                let s = *x as u32 + m as u32 * y as u32;
                let qt = (s * magic) >> Self::SHIFT;
                *x = (s - qt * p) as u8;
            }
        } else {
            for (x, &y) in v.iter_mut().zip(r) {
                *x = ((*x as u32 + m as u32 * y as u32) % p) as u8;
            }
        }
    }
    #[inline]
    fn scale(&self, v: &mut [u8], m: u8) {
        for x in v.iter_mut() {
            *x = (*x as u32 * m as u32 % self.p) as u8;
        }
    }
}

#[derive(Clone)]
enum Rows {
    Bits { rows: Vec<Vec<u64>> },
    Bytes { modp: ModP, rows: Vec<Vec<u8>> },
}

const NONE: u32 = u32::MAX;

/// Incremental echelon form over F_p, pivoting on the highest nonzero column.
/// Over F_2 rows are packed into machine words.
#[derive(Clone)]
pub struct Echelon {
    p: u32,
    ncols: usize,
    rows: Rows,
    pivot_row: Vec<u32>,
    pivot_cols: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, ncols: usize) -> Self {
        let rows = if p == 2 {
            Rows::Bits { rows: Vec::new() }
        } else {
            Rows::Bytes { modp: ModP::new(p), rows: Vec::new() }
        };
        Echelon { p, ncols, rows, pivot_row: vec![NONE; ncols], pivot_cols: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// The same span with zero columns appended.
    pub fn widened(&self, ncols: usize) -> Echelon {
        assert!(ncols >= self.ncols);
        let rows = match &self.rows {
            Rows::Bits { rows } => Rows::Bits {
                rows: rows
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.resize(ncols.div_ceil(64), 0);
                        r
                    })
                    .collect(),
            },
            Rows::Bytes { modp, rows } => Rows::Bytes {
                modp: *modp,
                rows: rows
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.resize(ncols, 0);
                        r
                    })
                    .collect(),
            },
        };
        let mut pivot_row = self.pivot_row.clone();
        pivot_row.resize(ncols, NONE);
        Echelon { p: self.p, ncols, rows, pivot_row, pivot_cols: self.pivot_cols.clone() }
    }
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
    /// Number of pivots in columns < cols, i.e. the dimension of the
    /// intersection with the subspace of vectors supported there.
    pub fn rank_below(&self, cols: usize) -> usize {
        self.pivot_row[..cols.min(self.ncols)].iter().filter(|&&r| r != NONE).count()
    }

    fn pack(v: &[u8]) -> Vec<u64> {
        let mut w = vec![0u64; v.len().div_ceil(64)];
        for (i, &x) in v.iter().enumerate() {
            if x & 1 == 1 {
                w[i / 64] |= 1 << (i % 64);
            }
        }
        w
    }

    fn unpack(w: &[u64], n: usize) -> Vec<u8> {
        (0..n).map(|i| ((w[i / 64] >> (i % 64)) & 1) as u8).collect()
    }

    fn top_bits(w: &[u64], upto: usize) -> Option<usize> {
        let mut i = upto.div_ceil(64);
        while i > 0 {
            i -= 1;
            if w[i] != 0 {
                return Some(i * 64 + 63 - w[i].leading_zeros() as usize);
            }
        }
        None
    }

    fn top_bytes(v: &[u8], upto: usize) -> Option<usize> {
        v[..upto].iter().rposition(|&x| x != 0)
    }

    /// Reduces v in place against the stored rows; returns the top column
    /// of the residue, or None when v lies in the span.
    pub fn reduce(&self, v: &mut [u8]) -> Option<usize> {
        assert_eq!(v.len(), self.ncols, "vector length must match the ambient dimension");
        match &self.rows {
            Rows::Bits { rows } => {
                let mut w = Self::pack(v);
                let top = self.reduce_bits(&mut w, rows);
                v.copy_from_slice(&Self::unpack(&w, self.ncols));
                top
            }
            Rows::Bytes { modp, rows } => self.reduce_bytes(v, rows, modp),
        }
    }

    fn reduce_bits(&self, w: &mut [u64], rows: &[Vec<u64>]) -> Option<usize> {
        let mut upto = self.ncols;
        while let Some(top) = Self::top_bits(w, upto) {
            let r = self.pivot_row[top];
            if r == NONE {
                return Some(top);
            }
            let row = &rows[r as usize];
            for k in 0..=top / 64 {
                w[k] ^= row[k];
            }
            upto = top;
        }
        None
    }

    fn reduce_bytes(&self, v: &mut [u8], rows: &[Vec<u8>], modp: &ModP) -> Option<usize> {
        let p = self.p as u8;
        let mut upto = self.ncols;
        while let Some(top) = Self::top_bytes(v, upto) {
            let r = self.pivot_row[top];
            if r == NONE {
                return Some(top);
            }
            let m = p - v[top];
            modp.axpy(&mut v[..=top], m, &rows[r as usize][..=top]);
            upto = top;
        }
        None
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds v to the span; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.ncols, "vector length must match the ambient dimension");
        let p = self.p;
        let idx = self.pivot_cols.len() as u32;
        match &mut self.rows {
            Rows::Bits { rows } => {
                let mut w = Self::pack(v);
                let mut upto = self.ncols;
                while let Some(top) = Self::top_bits(&w, upto) {
                    let r = self.pivot_row[top];
                    if r == NONE {
                        self.pivot_row[top] = idx;
                        self.pivot_cols.push(top);
                        rows.push(w);
                        return true;
                    }
                    let row = &rows[r as usize];
                    for k in 0..=top / 64 {
                        w[k] ^= row[k];
                    }
                    upto = top;
                }
                false
            }
            Rows::Bytes { modp, rows } => {
                let mut w = v.to_vec();
                let mut upto = self.ncols;
                while let Some(top) = Self::top_bytes(&w, upto) {
                    let r = self.pivot_row[top];
                    if r == NONE {
                        let inv = fp_inv(w[top] as u32, p) as u8;
                        if inv != 1 {
                            modp.scale(&mut w[..=top], inv);
                        }
                        self.pivot_row[top] = idx;
                        self.pivot_cols.push(top);
                        rows.push(w);
                        return true;
                    }
                    let m = p as u8 - w[top];
                    modp.axpy(&mut w[..=top], m, &rows[r as usize][..=top]);
                    upto = top;
                }
                false
            }
        }
    }

    /// Fully reduced basis, rows sorted by descending pivot column.
    pub fn into_rref(self) -> (Vec<Vec<u8>>, Vec<usize>) {
        let ncols = self.ncols;
        let mut order: Vec<usize> = (0..self.pivot_cols.len()).collect();
        // Ascending pivot: each row only needs clearing against lower pivots.
        order.sort_by_key(|&i| self.pivot_cols[i]);
        let mut out: Vec<Vec<u8>> = match self.rows {
            Rows::Bits { rows } => {
                let mut rows = rows;
                for (a, &i) in order.iter().enumerate() {
                    for &j in order[..a].iter().rev() {
                        let c = self.pivot_cols[j];
                        if (rows[i][c / 64] >> (c % 64)) & 1 == 1 {
                            let rj = rows[j].clone();
                            for k in 0..=c / 64 {
                                rows[i][k] ^= rj[k];
                            }
                        }
                    }
                }
                order.iter().rev().map(|&i| Self::unpack(&rows[i], ncols)).collect()
            }
            Rows::Bytes { modp, rows } => {
                let mut rows = rows;
                let p = self.p as u8;
                for (a, &i) in order.iter().enumerate() {
                    // Clear from the highest lower pivot downward.
                    for &j in order[..a].iter().rev() {
                        let c = self.pivot_cols[j];
                        let x = rows[i][c];
                        if x != 0 {
                            let rj = rows[j].clone();
                            modp.axpy(&mut rows[i][..=c], p - x, &rj[..=c]);
                        }
                    }
                }
                order.iter().rev().map(|&i| std::mem::take(&mut rows[i])).collect()
            }
        };
        for r in out.iter_mut() {
            r.resize(ncols, 0);
        }
        let mut piv: Vec<usize> = self.pivot_cols;
        piv.sort_unstable_by(|a, b| b.cmp(a));
        (out, piv)
    }
}

/// An F_p-subspace of a window, stored as a fully reduced basis whose rows
/// are sorted by descending pivot (highest nonzero coordinate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSubspace {
    window: Window,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn zero(w: &Window) -> Self {
        FpSubspace { window: w.clone(), basis: vec![], pivots: vec![] }
    }

    pub fn ambient(w: &Window) -> Self {
        let n = w.dim();
        let basis = (0..n)
            .rev()
            .map(|i| {
                let mut v = vec![0u8; n];
                v[i] = 1;
                v
            })
            .collect();
        FpSubspace { window: w.clone(), basis, pivots: (0..n).rev().collect() }
    }

    pub fn from_echelon(e: Echelon, w: &Window) -> Self {
        debug_assert_eq!(e.ncols(), w.dim());
        let (basis, pivots) = e.into_rref();
        FpSubspace { window: w.clone(), basis, pivots }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn codim_in_window(&self) -> usize {
        self.window.dim() - self.dim()
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.window.fld.p(), self.window.dim());
        for r in &self.basis {
            e.insert(r);
        }
        e
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_pol(&self, a: &Pol) -> bool {
        match embed(a, &self.window) {
            Ok(v) => self.contains(&v),
            Err(_) => false,
        }
    }

    pub fn basis_pols(&self) -> Vec<Pol> {
        self.basis.iter().map(|r| unembed(r, &self.window)).collect()
    }

    /// Intersection with the smaller window of degree ≤ n.
    pub fn truncate(&self, n: usize) -> Result<FpSubspace> {
        if n > self.window.n {
            return Err(Error::Window(format!("cannot truncate N = {} to larger {n}", self.window.n)));
        }
        let w = Window::new(n, &self.window.fld)?;
        let cols = w.dim();
        let (basis, pivots) = self
            .basis
            .iter()
            .zip(&self.pivots)
            .filter(|(_, &c)| c < cols)
            .map(|(r, &c)| (r[..cols].to_vec(), c))
            .unzip();
        Ok(FpSubspace { window: w, basis, pivots })
    }

    /// The same subspace viewed inside a larger window.
    pub fn extend(&self, n: usize) -> Result<FpSubspace> {
        if n < self.window.n {
            return Err(Error::Window(format!("cannot extend N = {} to smaller {n}", self.window.n)));
        }
        let w = Window::new(n, &self.window.fld)?;
        let basis = self
            .basis
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.resize(w.dim(), 0);
                v
            })
            .collect();
        Ok(FpSubspace { window: w, basis, pivots: self.pivots.clone() })
    }
}

pub fn span_rref(vectors: &[Vec<u8>], w: &Window) -> Result<FpSubspace> {
    let mut e = Echelon::new(w.fld.p(), w.dim());
    for v in vectors {
        if v.len() != w.dim() {
            return Err(Error::Parameter(format!("vector of length {} in ambient dimension {}", v.len(), w.dim())));
        }
        if v.iter().any(|&x| x as u32 >= w.fld.p()) {
            return Err(Error::Parameter("coordinate outside [0, p)".into()));
        }
        e.insert(v);
    }
    Ok(FpSubspace::from_echelon(e, w))
}

pub fn span_pols(pols: &[Pol], w: &Window) -> Result<FpSubspace> {
    let mut e = Echelon::new(w.fld.p(), w.dim());
    let mut v = vec![0u8; w.dim()];
    for a in pols {
        v.iter_mut().for_each(|x| *x = 0);
        embed_into(a, w, &mut v)?;
        e.insert(&v);
    }
    Ok(FpSubspace::from_echelon(e, w))
}

fn same_window(u: &FpSubspace, w: &FpSubspace) -> Result<()> {
    if u.window != w.window {
        return Err(Error::Parameter("subspaces live in different windows".into()));
    }
    Ok(())
}

pub fn subspace_sum(u: &FpSubspace, w: &FpSubspace) -> Result<FpSubspace> {
    same_window(u, w)?;
    let mut e = u.echelon();
    for r in &w.basis {
        e.insert(r);
    }
    Ok(FpSubspace::from_echelon(e, &u.window))
}

/// Zassenhaus: echelonize rows (u | u) and (w | 0) with the first block as
/// the high-priority columns; rows with empty first block span U ∩ W.
pub fn subspace_intersect(u: &FpSubspace, w: &FpSubspace) -> Result<FpSubspace> {
    same_window(u, w)?;
    let n = u.window.dim();
    let mut e = Echelon::new(u.window.fld.p(), 2 * n);
    let mut v = vec![0u8; 2 * n];
    for r in &u.basis {
        v[..n].copy_from_slice(r);
        v[n..].copy_from_slice(r);
        e.insert(&v);
    }
    for r in &w.basis {
        v[..n].iter_mut().for_each(|x| *x = 0);
        v[n..].copy_from_slice(r);
        e.insert(&v);
    }
    let (rows, pivots) = e.into_rref();
    let mut out = Echelon::new(u.window.fld.p(), n);
    for (r, c) in rows.iter().zip(pivots) {
        if c < n {
            out.insert(&r[..n]);
        }
    }
    Ok(FpSubspace::from_echelon(out, &u.window))
}

pub fn codim_in_window(u: &FpSubspace) -> usize {
    u.codim_in_window()
}

/// Finite-codimension subspace V ⊂ F⁻ given as the common kernel of k
/// functionals on the coefficients of degree ≤ D.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSubspaceSpec {
    pub depth: usize,
    /// Each row has d(D+1) residues mod p.
    pub constraints: Vec<Vec<u8>>,
}

impl TailSubspaceSpec {
    /// V = F⁻.
    pub fn full() -> Self {
        TailSubspaceSpec { depth: 0, constraints: vec![] }
    }

    pub fn new(depth: usize, constraints: Vec<Vec<u8>>, fld: &FqField) -> Result<Self> {
        let w = Window::new(depth, fld)?;
        let spec = TailSubspaceSpec { depth, constraints };
        let span = span_rref(&spec.constraints, &w)?;
        if span.dim() != spec.constraints.len() {
            return Err(Error::Parameter("constraints are linearly dependent".into()));
        }
        Ok(spec)
    }

    pub fn k(&self) -> usize {
        self.constraints.len()
    }

    fn eval_all(&self, v: &[u8], p: u32) -> bool {
        self.constraints.iter().all(|c| {
            c.iter().zip(v).map(|(&x, &y)| x as u32 * y as u32).sum::<u32>() % p == 0
        })
    }

    pub fn contains(&self, a: &Pol, fld: &FqField) -> bool {
        let w = Window { n: self.depth, fld: fld.clone() };
        let d = w.d();
        let low = Pol::from_coeffs(a.coeffs().iter().take(self.depth + 1).copied().collect());
        let mut v = vec![0u8; d * (self.depth + 1)];
        embed_into(&low, &w, &mut v).expect("degree within depth");
        self.eval_all(&v, fld.p())
    }

    /// V ∩ (degree ≤ n), for any n.
    pub fn capped(&self, n: usize, fld: &FqField) -> Result<FpSubspace> {
        let big = Window::new(n.max(self.depth), fld)?;
        realize_tail(self, &big)?.truncate(n)
    }
}

/// Kernel of the constraints on degrees ≤ D, everything on degrees in (D, N].
pub fn realize_tail(spec: &TailSubspaceSpec, w: &Window) -> Result<FpSubspace> {
    if w.n < spec.depth {
        return Err(Error::Window(format!("window N = {} below constraint depth D = {}", w.n, spec.depth)));
    }
    let p = w.fld.p();
    let m = w.cols_upto(spec.depth);
    let cw = Window::new(spec.depth, &w.fld)?;
    let c = span_rref(&spec.constraints, &cw)?;
    let pivots: Vec<usize> = c.pivots().to_vec();
    let mut e = Echelon::new(p, w.dim());
    let mut is_pivot = vec![false; m];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    for j in 0..w.dim() {
        let mut v = vec![0u8; w.dim()];
        v[j] = 1;
        if j < m {
            if is_pivot[j] {
                continue;
            }
            for (row, &pc) in c.basis().iter().zip(&pivots) {
                v[pc] = ((p - row[j] as u32) % p) as u8;
            }
        }
        e.insert(&v);
    }
    Ok(FpSubspace::from_echelon(e, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Plain Gaussian elimination rank, pivoting on the lowest column.
    fn oracle_rank(rows: &[Vec<u8>], p: u32) -> usize {
        let mut m: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| x as u32).collect()).collect();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
            m.swap(rank, piv);
            let inv = fp_inv(m[rank][col], p);
            for x in m[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..m.len() {
                if i != rank && m[i][col] != 0 {
                    let c = m[i][col];
                    let r = m[rank].clone();
                    for (x, y) in m[i].iter_mut().zip(r) {
                        *x = (*x + p * p - c * y) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    // All vectors of the span, by enumerating coefficient tuples.
    fn enumerate_span(rows: &[Vec<u8>], p: u32, n: usize) -> std::collections::BTreeSet<Vec<u8>> {
        let mut out = std::collections::BTreeSet::new();
        let total = (p as usize).pow(rows.len() as u32);
        for mut idx in 0..total {
            let mut v = vec![0u32; n];
            for r in rows {
                let c = (idx % p as usize) as u32;
                idx /= p as usize;
                for (x, &y) in v.iter_mut().zip(r) {
                    *x = (*x + c * y as u32) % p;
                }
            }
            out.insert(v.into_iter().map(|x| x as u8).collect());
        }
        out
    }

    fn random_rows(rng: &mut ChaCha8Rng, count: usize, n: usize, p: u32) -> Vec<Vec<u8>> {
        (0..count).map(|_| (0..n).map(|_| rng.gen_range(0..p) as u8).collect()).collect()
    }

    #[test]
    fn embed_examples() {
        let f3 = FqField::new(3, 1).unwrap();
        let w = Window::new(2, &f3).unwrap();
        assert_eq!(embed(&Pol::zero(), &w).unwrap(), vec![0, 0, 0]);
        assert_eq!(embed(&Pol::one(), &w).unwrap(), vec![1, 0, 0]);
        assert!(embed(&Pol::t_inv_pow(3), &w).is_err());
        let f9 = FqField::new(3, 2).unwrap();
        let w9 = Window::new(1, &f9).unwrap();
        assert_eq!(embed(&Pol::monomial(f9.generator(), 1), &w9).unwrap(), vec![0, 0, 0, 1]);
        let a = Pol::from_coeffs(vec![FqElem::from_index(5), FqElem::from_index(7)]);
        assert_eq!(unembed(&embed(&a, &w9).unwrap(), &w9), a);
    }

    #[test]
    fn span_examples() {
        let f = FqField::new(3, 1).unwrap();
        let w = Window::new(5, &f).unwrap();
        assert_eq!(span_rref(&[], &w).unwrap().dim(), 0);
        let v = vec![1, 2, 0, 1, 0, 0];
        assert_eq!(span_rref(&[v.clone(), v], &w).unwrap().dim(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = random_rows(&mut rng, 3, 6, 3);
            assert_eq!(span_rref(&rows, &w).unwrap().dim(), oracle_rank(&rows, 3));
        }
        let zero = FpSubspace::zero(&Window::new(2, &f).unwrap());
        assert_eq!(codim_in_window(&zero), 3);
        assert_eq!(codim_in_window(&FpSubspace::ambient(&w)), 0);
    }

    #[test]
    fn sum_and_intersection_against_enumeration() {
        let f = FqField::new(2, 1).unwrap();
        let w = Window::new(7, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let (ca, cb) = (rng.gen_range(0..6), rng.gen_range(0..6));
            let a = random_rows(&mut rng, ca, 8, 2);
            let b = random_rows(&mut rng, cb, 8, 2);
            let (u, v) = (span_rref(&a, &w).unwrap(), span_rref(&b, &w).unwrap());
            let s = subspace_sum(&u, &v).unwrap();
            let i = subspace_intersect(&u, &v).unwrap();
            assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            let eu = enumerate_span(u.basis(), 2, 8);
            let ev = enumerate_span(v.basis(), 2, 8);
            let ei = enumerate_span(i.basis(), 2, 8);
            let expect: std::collections::BTreeSet<_> = eu.intersection(&ev).cloned().collect();
            assert_eq!(ei, expect);
        }
        let u = span_rref(&[vec![1, 0, 0, 0, 0, 0, 0, 0]], &w).unwrap();
        assert_eq!(subspace_intersect(&u, &u).unwrap(), u);
        assert_eq!(subspace_sum(&u, &FpSubspace::zero(&w)).unwrap(), u);
        let other = FpSubspace::zero(&Window::new(3, &f).unwrap());
        assert!(subspace_sum(&u, &other).is_err());
    }

    #[test]
    fn complementary_coordinate_subspaces() {
        let f = FqField::new(3, 1).unwrap();
        let w = Window::new(3, &f).unwrap();
        let unit = |i: usize| {
            let mut v = vec![0u8; 4];
            v[i] = 1;
            v
        };
        let u = span_rref(&[unit(0), unit(2)], &w).unwrap();
        let v = span_rref(&[unit(1), unit(3)], &w).unwrap();
        assert_eq!(subspace_sum(&u, &v).unwrap().codim_in_window(), 0);
        assert_eq!(subspace_intersect(&u, &v).unwrap().dim(), 0);
    }

    #[test]
    fn membership_matches_enumeration() {
        for (p, n) in [(2u32, 12usize), (3, 7)] {
            let f = FqField::new(p, 1).unwrap();
            let w = Window::new(n - 1, &f).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            for _ in 0..5 {
                let rows = random_rows(&mut rng, 3, n, p);
                let u = span_rref(&rows, &w).unwrap();
                let all = enumerate_span(&rows, p, n);
                for _ in 0..100 {
                    let v: Vec<u8> = (0..n).map(|_| rng.gen_range(0..p) as u8).collect();
                    assert_eq!(u.contains(&v), all.contains(&v));
                }
                for v in all.iter().take(50) {
                    assert!(u.contains(v));
                }
            }
        }
    }

    #[test]
    fn tail_examples() {
        let f = FqField::new(3, 1).unwrap();
        let w = Window::new(4, &f).unwrap();
        assert_eq!(realize_tail(&TailSubspaceSpec::full(), &w).unwrap().codim_in_window(), 0);
        let spec = TailSubspaceSpec::new(0, vec![vec![1]], &f).unwrap();
        let v = realize_tail(&spec, &w).unwrap();
        assert_eq!(v.dim(), 4);
        for j in 1..=4 {
            assert!(v.contains_pol(&Pol::t_inv_pow(j)));
        }
        assert!(!v.contains_pol(&Pol::one()));
        let spec2 = TailSubspaceSpec::new(2, vec![vec![1, 2, 0], vec![0, 1, 1]], &f).unwrap();
        let w6 = Window::new(6, &f).unwrap();
        let v2 = realize_tail(&spec2, &w6).unwrap();
        assert_eq!(v2.codim_in_window(), 2);
        assert_eq!(oracle_rank(&spec2.constraints, 3), 2);
        for b in v2.basis_pols() {
            assert!(spec2.contains(&b, &f));
        }
        assert!(realize_tail(&spec2, &Window::new(1, &f).unwrap()).is_err());
        assert!(TailSubspaceSpec::new(1, vec![vec![1, 1], vec![2, 2]], &f).is_err());
    }

    #[test]
    fn tail_window_consistency() {
        let f = FqField::new(3, 2).unwrap();
        let spec = TailSubspaceSpec::new(2, vec![vec![1, 0, 2, 1, 0, 0], vec![0, 0, 0, 1, 1, 2]], &f).unwrap();
        let big = realize_tail(&spec, &Window::new(9, &f).unwrap()).unwrap();
        let small = realize_tail(&spec, &Window::new(5, &f).unwrap()).unwrap();
        assert_eq!(big.truncate(5).unwrap(), small);
        let mut e = small.extend(9).unwrap().echelon();
        let w9 = Window::new(9, &f).unwrap();
        for j in 6..=9 {
            for g in f.fp_basis() {
                e.insert(&embed(&Pol::monomial(g, j), &w9).unwrap());
            }
        }
        assert_eq!(FpSubspace::from_echelon(e, &w9), big);
    }

    proptest! {
        #[test]
        fn span_is_idempotent(seed in 0u64..10_000, count in 0usize..8, p in prop::sample::select(vec![2u32, 3, 5])) {
            let f = FqField::new(p, 1).unwrap();
            let w = Window::new(9, &f).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = random_rows(&mut rng, count, 10, p);
            let u = span_rref(&rows, &w).unwrap();
            prop_assert_eq!(u.dim(), oracle_rank(&rows, p));
            let again = span_rref(u.basis(), &w).unwrap();
            prop_assert_eq!(&again, &u);
            for r in &rows {
                prop_assert!(u.contains(r));
            }
        }
    }
}
