//! Finite fields F_q = F_p[x]/(f) with f the least monic irreducible of degree d.
//!
//! Elements are packed as the integer sum of c_i p^i over their power-basis
//! coordinates, so they are `Copy` and hash cheaply. Multiplication goes
//! through discrete log tables built once per field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_Q: u32 = 1 << 16;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// q = p^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u32,
    pub d: u32,
    pub q: u32,
}

impl PrimePower {
    pub fn new(p: u32, d: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("p = {p} is not prime")));
        }
        if d == 0 {
            return Err(Error::Parameter("d >= 1 required".into()));
        }
        let q = p
            .checked_pow(d)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::Parameter(format!("q = {p}^{d} exceeds {MAX_Q}")))?;
        Ok(PrimePower { p, d, q })
    }

    /// Recovers (p, d) from q.
    pub fn from_q(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!("q = {q} is not a prime power")));
        }
        let p = (2..=q).find(|k| q.is_multiple_of(*k)).unwrap();
        let mut d = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            d += 1;
        }
        if r != 1 {
            return Err(Error::Parameter(format!("q = {q} is not a prime power")));
        }
        PrimePower::new(p, d)
    }
}

/// An element of F_q, packed as an index in [0, q).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }
    pub fn from_index(i: u32) -> Self {
        FqElem(i)
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Frob^power, i.e. x -> x^(p^power).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisElement {
    pub power: u32,
}

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub d: u32,
    pub modulus: Vec<u32>,
}

struct FieldData {
    params: PrimePower,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// The field F_q together with its arithmetic tables. Cloning is cheap.
#[derive(Clone)]
pub struct FqField {
    data: Arc<FieldData>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x]/{:?}", self.p(), self.data.modulus)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.params == other.data.params && self.data.modulus == other.data.modulus)
    }
}
impl Eq for FqField {}

// Dense polynomials over F_p, low degree first, used only to set up the field.
fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn pmod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for i in 0..=dm {
            let idx = top - dm + i;
            r[idx] = (r[idx] + p - c * m[i] % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn pmul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(&mut r);
    r
}

fn psub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut r: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut r);
    r
}

fn pdivmod(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    let mut quo = vec![0u32; r.len().saturating_sub(dm)];
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        quo[top - dm] = c;
        for i in 0..=dm {
            let idx = top - dm + i;
            r[idx] = (r[idx] + p - c * m[i] % p) % p;
        }
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

fn digits(mut n: u32, p: u32, d: u32) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let c = n % p;
            n /= p;
            c
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    for deg in 1..=d / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut g = digits(low, p, deg as u32);
            g.push(1);
            if pmod(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, d: u32) -> Vec<u32> {
    if d == 1 {
        return vec![0, 1];
    }
    let count = p.pow(d);
    for low in 0..count {
        let mut f = digits(low, p, d);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Inverse of a nonzero residue modulo an irreducible m, by extended Euclid.
fn euclid_inv(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![], vec![1u32]);
    trim(&mut r1);
    while !r1.is_empty() {
        let (quo, rem) = pdivmod(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&quo, &s1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant.
    let c = fp_inv(r0[0], p);
    let mut out: Vec<u32> = s0.iter().map(|&x| x * c % p).collect();
    trim(&mut out);
    pmod(&out, m, p)
}

impl FqField {
    pub fn new(p: u32, d: u32) -> Result<Self> {
        let params = PrimePower::new(p, d)?;
        let modulus = least_irreducible(p, d);
        Self::build(params, modulus)
    }

    pub fn from_q(q: u32) -> Result<Self> {
        let pp = PrimePower::from_q(q)?;
        Self::new(pp.p, pp.d)
    }

    /// Rebuilds a field from serialized parameters, validating the modulus.
    pub fn from_params(fp: &FieldParams) -> Result<Self> {
        let params = PrimePower::new(fp.p, fp.d)?;
        let m = &fp.modulus;
        if m.len() != fp.d as usize + 1 || m[fp.d as usize] != 1 || m.iter().any(|&c| c >= fp.p) {
            return Err(Error::Parameter("modulus must be monic of degree d with residues < p".into()));
        }
        if !is_irreducible(m, fp.p) {
            return Err(Error::Parameter("modulus is reducible".into()));
        }
        Self::build(params, m.clone())
    }

    fn build(params: PrimePower, modulus: Vec<u32>) -> Result<Self> {
        let PrimePower { p, d, q } = params;
        let mulref = |a: u32, b: u32| -> u32 {
            let r = pmod(&pmul(&digits(a, p, d), &digits(b, p, d), p), &modulus, p);
            undigits(&r, p)
        };
        let order = q - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let mut x = 1u32;
            let mut k = 0u32;
            loop {
                exp[k as usize] = x;
                k += 1;
                x = mulref(x, g);
                if x == 1 {
                    break;
                }
            }
            if k == order {
                found = true;
                break;
            }
        }
        debug_assert!(found);
        for k in 0..order {
            exp[(k + order) as usize] = exp[k as usize];
            log[exp[k as usize] as usize] = k;
        }
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            inv[a as usize] = undigits(&euclid_inv(&digits(a, p, d), &modulus, p), p);
        }
        let addf = |a: u32, b: u32| -> u32 {
            let (x, y) = (digits(a, p, d), digits(b, p, d));
            let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
            undigits(&s, p)
        };
        let add = if p != 2 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = addf(a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        let neg = (0..q)
            .map(|a| undigits(&digits(a, p, d).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        Ok(FqField {
            data: Arc::new(FieldData { params, modulus, exp, log, inv, add, neg }),
        })
    }

    pub fn params(&self) -> PrimePower {
        self.data.params
    }
    pub fn p(&self) -> u32 {
        self.data.params.p
    }
    pub fn d(&self) -> u32 {
        self.data.params.d
    }
    pub fn q(&self) -> u32 {
        self.data.params.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.data.modulus
    }
    pub fn to_params(&self) -> FieldParams {
        FieldParams { p: self.p(), d: self.d(), modulus: self.data.modulus.clone() }
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p() as i64) as u32)
    }

    /// The class of x (for d = 1 this is 0).
    pub fn generator(&self) -> FqElem {
        if self.d() == 1 {
            FqElem::ZERO
        } else {
            FqElem(self.p())
        }
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        digits(a.0, self.p(), self.d())
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<FqElem> {
        if c.len() != self.d() as usize || c.iter().any(|&x| x >= self.p()) {
            return Err(Error::Parameter(format!(
                "expected {} residues below {}, got {:?}",
                self.d(),
                self.p(),
                c
            )));
        }
        Ok(FqElem(undigits(c, self.p())))
    }

    /// Checks that the element belongs to this field.
    pub fn check(&self, a: FqElem) -> Result<FqElem> {
        if a.0 < self.q() {
            Ok(a)
        } else {
            Err(Error::Parameter(format!("element index {} outside F_{}", a.0, self.q())))
        }
    }

    /// The F_p-basis 1, x, ..., x^(d-1).
    pub fn fp_basis(&self) -> Vec<FqElem> {
        (0..self.d()).map(|i| FqElem(self.p().pow(i))).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q()).map(FqElem)
    }

    pub fn is_prime_field(&self, a: FqElem) -> bool {
        a.0 < self.p()
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p();
        if p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if let Some(t) = &self.data.add {
            return FqElem(t[(a.0 * self.q() + b.0) as usize]);
        }
        if self.d() == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut pw, mut r) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.d() {
            r += ((x % p + y % p) % p) * pw;
            x /= p;
            y /= p;
            pw *= p;
        }
        FqElem(r)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.data.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let l = self.data.log[a.0 as usize] + self.data.log[b.0 as usize];
        FqElem(self.data.exp[l as usize])
    }

    /// Multiplication with a membership check on both operands.
    pub fn try_mul(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FqElem(self.data.inv[a.0 as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let order = (self.q() - 1) as u64;
        let l = (self.data.log[a.0 as usize] as u64 * (e % order)) % order;
        FqElem(self.data.exp[l as usize])
    }

    /// Frob^i(a) = a^(p^i).
    pub fn frobenius(&self, a: FqElem, i: u32) -> FqElem {
        let i = i % self.d();
        self.pow(a, (self.p() as u64).pow(i))
    }

    /// Inverse of Frob^i.
    pub fn frobenius_inv(&self, a: FqElem, i: u32) -> FqElem {
        let d = self.d();
        self.frobenius(a, (d - i % d) % d)
    }

    /// A p-th root (Frobenius is bijective on a finite field).
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.frobenius_inv(a, 1)
    }

    pub fn enumerate_galois(&self) -> Vec<GaloisElement> {
        (0..self.d()).map(|power| GaloisElement { power }).collect()
    }

    pub fn galois_compose(&self, a: GaloisElement, b: GaloisElement) -> GaloisElement {
        GaloisElement { power: (a.power + b.power) % self.d() }
    }

    pub fn galois_inverse(&self, a: GaloisElement) -> GaloisElement {
        GaloisElement { power: (self.d() - a.power % self.d()) % self.d() }
    }

    pub fn apply_galois(&self, g: GaloisElement, a: FqElem) -> FqElem {
        self.frobenius(a, g.power)
    }

    /// F_p-coordinates of a in the power basis, as residues.
    pub fn fp_coords_into(&self, a: FqElem, out: &mut [u8]) {
        let p = self.p();
        let mut x = a.0;
        for slot in out.iter_mut().take(self.d() as usize) {
            *slot = (x % p) as u8;
            x /= p;
        }
    }

    pub fn scalar(&self, c: u32, a: FqElem) -> FqElem {
        self.mul(self.from_int(c as i64), a)
    }
}
