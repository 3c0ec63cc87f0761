//! Exact arithmetic in GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`: the value `Σ c_i p^i` encodes
//! the residue class of the polynomial `Σ c_i x^i` (constant term least
//! significant), so GF(p) elements read as plain integers, 0 is the additive
//! identity and 1 the multiplicative identity.
//!
//! Fields with q ≤ 2^16 carry log/antilog tables; larger fields fall back to
//! polynomial arithmetic with extended-Euclid inversion. Fields with q > 2^31
//! are rejected.

use std::sync::Arc;

use crate::{Error, Result};

/// An element of a finite field, encoded as an integer in `[0, q)`.
pub type GFElem = u32;

const TABLE_LIMIT: u64 = 1 << 16;
const ORDER_LIMIT: u128 = 1 << 31;
/// Root scans for subfield embeddings stay cheap below this order.
const EMBED_SCAN_LIMIT: u64 = 1 << 20;

/// GF(p^m) with a fixed monic irreducible modulus of degree m.
///
/// Immutable after construction; all operations are pure, so a field can be
/// shared freely across threads (typically as `Arc<FiniteField>`).
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Coefficients c_0..c_m of the modulus, constant term first; c_m = 1.
    modulus: Vec<u32>,
    /// exp[i] = g^i for a generator g, doubled in length so that
    /// exp[log a + log b] never wraps. Present iff q <= 2^16.
    exp: Option<Vec<u32>>,
    /// log[a] for a != 0; log[0] is a sentinel.
    log: Option<Vec<u32>>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for FiniteField {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor q as p^m with p prime, if it is a prime power.
pub(crate) fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    if !is_prime(p) {
        return None;
    }
    let mut rest = q;
    let mut m = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest == 1 {
        Some((p, m))
    } else {
        None
    }
}

// ---- polynomial helpers over GF(p): coefficients ascending, trimmed ----

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let blead_inv = scalar_inv(*b.last().unwrap(), p);
    let mut quot = vec![0u32; r.len() - db];
    while r.len() > db {
        let coef = ((*r.last().unwrap() as u64 * blead_inv as u64) % p as u64) as u32;
        let shift = r.len() - 1 - db;
        quot[shift] = coef;
        for i in 0..=db {
            let sub = (coef as u64 * b[i] as u64) % p as u64;
            let idx = i + shift;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    poly_trim(&mut quot);
    (quot, r)
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    poly_divmod(a, b, p).1
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let ai = a.get(i).copied().unwrap_or(0) as u64;
        let bi = b.get(i).copied().unwrap_or(0) as u64;
        *o = ((ai + p as u64 - bi) % p as u64) as u32;
    }
    poly_trim(&mut out);
    out
}

/// Extended Euclid: u with u * a == 1 (mod modulus); `a` nonzero mod modulus.
fn poly_modular_inverse(a: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut r0: Vec<u32> = modulus.to_vec();
    let mut r1: Vec<u32> = a.to_vec();
    poly_trim(&mut r1);
    let mut u0: Vec<u32> = vec![];
    let mut u1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (quot, rem) = poly_divmod(&r0, &r1, p);
        let nu = poly_sub(&u0, &poly_mul(&quot, &u1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        u0 = std::mem::replace(&mut u1, nu);
    }
    // r0 is the gcd, a nonzero constant since the modulus is irreducible.
    debug_assert_eq!(r0.len(), 1, "inverse of a zero divisor");
    let scale = scalar_inv(r0[0], p);
    let scaled: Vec<u32> = u0.iter().map(|&c| ((c as u64 * scale as u64) % p as u64) as u32).collect();
    poly_rem(&scaled, modulus, p)
}

fn scalar_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial division against every monic polynomial of degree <= m/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    for d in 1..=(m / 2) {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut rest = v;
            for _ in 0..d {
                div.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            div.push(1);
            if poly_rem(f, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn encode(poly: &[u32], p: u32) -> GFElem {
    let mut v = 0u64;
    for &c in poly.iter().rev() {
        v = v * p as u64 + c as u64;
    }
    v as GFElem
}

fn decode(value: GFElem, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut v = value as u64;
    while v > 0 {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

impl FiniteField {
    /// GF(p^m) with the default modulus: the lexicographically smallest monic
    /// irreducible polynomial of degree m over GF(p), comparing coefficient
    /// tuples read from the constant term upward. Deterministic, so files
    /// written by one build are readable by another.
    pub fn new(p: u32, m: u32) -> Result<FiniteField> {
        Self::check_shape(p, m)?;
        if m == 1 {
            // x itself: irreducible, and GF(p) arithmetic never reduces.
            return Self::with_modulus(p, 1, &[0, 1]);
        }
        let count = (p as u64).pow(m);
        for u in 0..count {
            // c_0 varies slowest: it is the most significant digit of u.
            let mut coeffs = vec![0u32; m as usize + 1];
            let mut rest = u;
            for i in (0..m as usize).rev() {
                coeffs[i] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            coeffs[m as usize] = 1;
            if is_irreducible(&coeffs, p) {
                return Self::with_modulus(p, m, &coeffs);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over GF(p)")
    }

    /// GF(p^m) with an explicitly supplied modulus (constant term first,
    /// length m+1, monic). Verified irreducible at construction.
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<FiniteField> {
        Self::check_shape(p, m)?;
        if modulus.len() != m as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulusDegree { expected: m, got: modulus.len().saturating_sub(1) });
        }
        if let Some(&bad) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::BadElement { value: bad as u64, q: p as u64 });
        }
        if m > 1 && !is_irreducible(modulus, p) {
            return Err(Error::ReducibleModulus { p: p as u64 });
        }
        let q = (p as u64).pow(m);
        let mut f = FiniteField { p, m, q: q as u32, modulus: modulus.to_vec(), exp: None, log: None };
        if q <= TABLE_LIMIT {
            f.build_tables();
        }
        Ok(f)
    }

    fn check_shape(p: u32, m: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::BadModulusDegree { expected: 1, got: 0 });
        }
        match (p as u128).checked_pow(m) {
            Some(q) if q <= ORDER_LIMIT => Ok(()),
            Some(q) => Err(Error::FieldTooLarge(q)),
            None => Err(Error::FieldTooLarge(u128::MAX)),
        }
    }

    fn build_tables(&mut self) {
        let q = self.q as u64;
        if q == 2 {
            self.exp = Some(vec![1, 1]);
            self.log = Some(vec![u32::MAX, 0]);
            return;
        }
        let group = q - 1;
        let mut factors = vec![];
        let mut n = group;
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                factors.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            factors.push(n);
        }
        let gen = (2..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow_poly(g, group / f) != 1))
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut acc: GFElem = 1;
        for i in 0..group as usize {
            exp[i] = acc;
            exp[i + group as usize] = acc;
            log[acc as usize] = i as u32;
            acc = self.mul_poly(acc, gen);
        }
        self.exp = Some(exp);
        self.log = Some(log);
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// The field order q = p^m.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Modulus coefficients c_0..c_m, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = GFElem> {
        0..self.q
    }

    pub fn add(&self, a: GFElem, b: GFElem) -> GFElem {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as GFElem
    }

    pub fn neg(&self, a: GFElem) -> GFElem {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += (p - a % p) % p * place;
            a /= p;
            place *= p;
        }
        out as GFElem
    }

    pub fn sub(&self, a: GFElem, b: GFElem) -> GFElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: GFElem, b: GFElem) -> GFElem {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        match (&self.exp, &self.log) {
            (Some(exp), Some(log)) => exp[(log[a as usize] + log[b as usize]) as usize],
            _ => self.mul_poly(a, b),
        }
    }

    /// Table-free multiplication; the reference path for every field.
    fn mul_poly(&self, a: GFElem, b: GFElem) -> GFElem {
        let prod = poly_mul(&decode(a, self.p), &decode(b, self.p), self.p);
        encode(&poly_rem(&prod, &self.modulus, self.p), self.p)
    }

    pub fn inv(&self, a: GFElem) -> Result<GFElem> {
        debug_assert!(a < self.q);
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        match (&self.exp, &self.log) {
            (Some(exp), Some(log)) => {
                let group = (self.q - 1) as usize;
                Ok(exp[(group - log[a as usize] as usize) % group])
            }
            _ => Ok(encode(&poly_modular_inverse(&decode(a, self.p), &self.modulus, self.p), self.p)),
        }
    }

    pub fn div(&self, a: GFElem, b: GFElem) -> Result<GFElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: GFElem, e: u64) -> GFElem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let e = e % (self.q as u64 - 1);
        match (&self.exp, &self.log) {
            (Some(exp), Some(log)) => {
                let group = self.q as u64 - 1;
                exp[((log[a as usize] as u64 * e) % group) as usize]
            }
            _ => self.pow_poly(a, e),
        }
    }

    fn pow_poly(&self, a: GFElem, mut e: u64) -> GFElem {
        let mut acc: GFElem = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    /// Evaluate a polynomial (coefficients in this field, constant first).
    pub fn eval(&self, coeffs: &[u32], x: GFElem) -> GFElem {
        let mut acc = 0;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

/// A GF(q)-linear identification of GF(q^h) with GF(q)^h.
///
/// Wraps the inclusion GF(q) ↪ GF(q^h) (the small field's generator is sent to
/// the smallest root of its modulus in the big field, so the map is
/// deterministic) together with a chosen basis e_1..e_h of GF(q^h) over GF(q).
/// `coordinates` and `combine` are mutually inverse.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    big: Arc<FiniteField>,
    small: Arc<FiniteField>,
    h: u32,
    basis: Vec<GFElem>,
    /// φ(a) for every a in the small field.
    embed_tbl: Vec<GFElem>,
    /// Inverse of the GF(p)-matrix of (c_1..c_h) -> Σ φ(c_j)·e_j, row-major,
    /// dimension (m_big) x (m_big). Applied to base-p digit vectors.
    coords_mat: Vec<Vec<u32>>,
}

impl SubfieldEmbedding {
    /// The default basis 1, x, x², …, x^{h-1} of GF(q^h) over GF(q), where x
    /// is the residue-class generator of the big field. Always a basis: x has
    /// degree h over the index-h subfield.
    pub fn default_basis(big: &FiniteField, h: u32) -> Vec<GFElem> {
        (0..h).map(|j| (big.p as u64).pow(j) as GFElem).collect()
    }

    /// The embedding of `small` into the default-modulus field of order
    /// q^h, with the default power basis — the tower every file format and
    /// conversion uses unless told otherwise.
    pub fn default_tower(small: Arc<FiniteField>, h: u32) -> Result<SubfieldEmbedding> {
        let big = Arc::new(FiniteField::new(small.p, small.m * h)?);
        let basis = SubfieldEmbedding::default_basis(&big, h);
        SubfieldEmbedding::new(big, small, &basis)
    }

    pub fn new(big: Arc<FiniteField>, small: Arc<FiniteField>, basis: &[GFElem]) -> Result<SubfieldEmbedding> {
        if big.p != small.p || !big.m.is_multiple_of(small.m) || big.m == 0 {
            return Err(Error::IncompatibleOrders { big: big.q as u64, small: small.q as u64 });
        }
        let h = big.m / small.m;
        if basis.len() != h as usize {
            return Err(Error::DependentBasis);
        }
        if basis.iter().any(|&b| b >= big.q) {
            return Err(Error::BadElement { value: *basis.iter().find(|&&b| b >= big.q).unwrap() as u64, q: big.q as u64 });
        }
        if big.q as u64 > EMBED_SCAN_LIMIT {
            return Err(Error::Unsupported(format!(
                "subfield embeddings are supported for big-field order <= {EMBED_SCAN_LIMIT}, got {}",
                big.q
            )));
        }

        // φ on the small field: identity on GF(p); otherwise send the small
        // generator to the smallest root of the small modulus in the big field.
        let mut embed_tbl = Vec::with_capacity(small.q as usize);
        if small.m == 1 {
            embed_tbl.extend(0..small.q);
        } else {
            let root = big
                .elements()
                .find(|&r| big.eval(&small.modulus, r) == 0)
                .expect("the big field splits every subfield modulus");
            for a in small.elements() {
                embed_tbl.push(big.eval(&decode(a, small.p), root));
            }
        }

        // GF(p)-matrix of (c_1..c_h) -> Σ φ(c_j)·e_j acting on digit vectors.
        let p = big.p;
        let mb = big.m as usize;
        let ms = small.m as usize;
        let mut mat = vec![vec![0u32; mb]; mb];
        for (j, &bj) in basis.iter().enumerate() {
            for i in 0..ms {
                // Image of the small basis monomial x^i in slot j.
                let col = j * ms + i;
                let small_mono = (small.p as u64).pow(i as u32) as GFElem;
                let img = big.mul(embed_tbl[small_mono as usize], bj);
                let digits = decode(img, p);
                for (r, &d) in digits.iter().enumerate() {
                    mat[r][col] = d;
                }
            }
        }
        let coords_mat = invert_gfp_matrix(&mat, p).ok_or(Error::DependentBasis)?;

        Ok(SubfieldEmbedding { big, small, h, basis: basis.to_vec(), embed_tbl, coords_mat })
    }

    pub fn h(&self) -> u32 {
        self.h
    }
    pub fn big(&self) -> &Arc<FiniteField> {
        &self.big
    }
    pub fn small(&self) -> &Arc<FiniteField> {
        &self.small
    }
    pub fn basis(&self) -> &[GFElem] {
        &self.basis
    }

    /// The inclusion GF(q) ↪ GF(q^h).
    pub fn embed(&self, a: GFElem) -> GFElem {
        self.embed_tbl[a as usize]
    }

    /// Coordinates (c_1..c_h) over GF(q) with α = Σ φ(c_j)·e_j.
    pub fn coordinates(&self, alpha: GFElem) -> Vec<GFElem> {
        debug_assert!(alpha < self.big.q);
        let p = self.big.p;
        let mb = self.big.m as usize;
        let ms = self.small.m as usize;
        let mut digits = decode(alpha, p);
        digits.resize(mb, 0);
        let mut out = Vec::with_capacity(self.h as usize);
        for j in 0..self.h as usize {
            let mut coeffs = Vec::with_capacity(ms);
            for i in 0..ms {
                let row = &self.coords_mat[j * ms + i];
                let mut acc = 0u64;
                for (c, &d) in digits.iter().enumerate() {
                    acc += row[c] as u64 * d as u64;
                }
                coeffs.push((acc % p as u64) as u32);
            }
            out.push(encode(&coeffs, p));
        }
        out
    }

    /// Inverse of [`coordinates`](Self::coordinates): Σ φ(c_j)·e_j.
    pub fn combine(&self, coords: &[GFElem]) -> GFElem {
        debug_assert_eq!(coords.len(), self.h as usize);
        let mut acc = 0;
        for (j, &c) in coords.iter().enumerate() {
            acc = self.big.add(acc, self.big.mul(self.embed(c), self.basis[j]));
        }
        acc
    }
}

/// Invert a square matrix over GF(p); None if singular.
fn invert_gfp_matrix(mat: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let mut a: Vec<Vec<u32>> = mat.to_vec();
    let mut inv: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = scalar_inv(a[col][col], p) as u64;
        for j in 0..n {
            a[col][j] = (a[col][j] as u64 * scale % p as u64) as u32;
            inv[col][j] = (inv[col][j] as u64 * scale % p as u64) as u32;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col] as u64;
                for j in 0..n {
                    a[r][j] = ((a[r][j] as u64 + (p as u64 - f % p as u64) * a[col][j] as u64) % p as u64) as u32;
                    inv[r][j] = ((inv[r][j] as u64 + (p as u64 - f % p as u64) * inv[col][j] as u64) % p as u64) as u32;
                }
            }
        }
    }
    Some(inv)
}
