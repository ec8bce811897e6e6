//! Finite fields F_{p^k} (p ≥ 5) as quotients F_p[t]/(m(t)).
//!
//! Two representations live here. [`Field`]/[`FieldElement`] hold coefficient
//! vectors and work for any degree; they back the torsion computations over
//! large extensions. [`Fq`] packs elements of a small field into a `u32` index
//! with log/exp tables and is what point counting and the censuses use.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::numth::{factor, is_prime, mul_mod, pow_mod};

/// Upper bound on log2(p^k) for [`make_field`].
pub const MAX_FIELD_BITS: u64 = 1024;

/// Seed of the equal-degree splitting RNG, fixed so root lists are reproducible.
const SPLIT_SEED: u64 = 0x5eed_0f_f1e1d;

#[derive(Clone)]
pub struct Field {
    p: u64,
    k: usize,
    /// Monic modulus, low degree first, length k + 1.
    modulus: Vec<u64>,
    /// Nonzero (index, p - m_i) pairs for i < k, used by reduction.
    neg_tail: Vec<(usize, u64)>,
    order: BigUint,
}

/// Element of a [`Field`]: coefficients of a polynomial of degree < k in t.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u64,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Lexicographic on (c_{k-1}, …, c_0), matching the modulus ordering.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Comma-separated coefficients, constant term first.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// Builds F_{p^k} with the lexicographically first monic irreducible modulus.
pub fn make_field(p: u64, k: usize) -> Result<Field> {
    if k == 0 {
        return invalid("extension degree must be at least 1");
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if p < 5 {
        return invalid(format!("characteristic {p} is not supported (need p >= 5)"));
    }
    if p >= 1 << 32 {
        return Err(Error::Overflow(format!("p = {p} exceeds 32 bits")));
    }
    let bits = (64 - p.leading_zeros()) as u64 * k as u64;
    if bits > MAX_FIELD_BITS + 64 {
        return Err(Error::Overflow(format!("{p}^{k} exceeds {MAX_FIELD_BITS} bits")));
    }
    let order = BigUint::from(p).pow(k as u32);
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        first_irreducible(p, k)
    };
    Ok(Field::with_modulus(p, modulus, order))
}

impl Field {
    fn with_modulus(p: u64, modulus: Vec<u64>, order: BigUint) -> Field {
        let k = modulus.len() - 1;
        let neg_tail = (0..k)
            .filter(|&i| modulus[i] != 0)
            .map(|i| (i, p - modulus[i]))
            .collect();
        Field { p, k, modulus, neg_tail, order }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// The modulus, constant term first. For k = 1 this is `t`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// q as a machine integer when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { p: self.p, coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = v.rem_euclid(self.p as i64) as u64;
        e
    }

    /// The class of t (a field generator over F_p when k > 1).
    pub fn gen(&self) -> FieldElement {
        if self.k == 1 {
            return self.zero();
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.k || coeffs.iter().any(|&c| c >= self.p) {
            return invalid("coefficients out of range for this field");
        }
        let mut e = self.zero();
        e.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(e)
    }

    /// Element whose coefficient vector is the base-p expansion of `i`.
    pub fn from_index(&self, mut i: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        e
    }

    pub fn to_index(&self, a: &FieldElement) -> Option<u64> {
        let mut acc: u64 = 0;
        for &c in a.coeffs.iter().rev() {
            acc = acc.checked_mul(self.p)?.checked_add(c)?;
        }
        Some(acc)
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.p == self.p
            && a.coeffs.len() == self.k && a.coeffs.iter().all(|&c| c < self.p)
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            invalid("element does not belong to this field")
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            p: self.p,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p { s - p } else { s }
                })
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            p: self.p,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            p: self.p,
            coeffs: a.coeffs.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect(),
        }
    }

    pub fn scale(&self, a: &FieldElement, s: u64) -> FieldElement {
        let s = s % self.p;
        FieldElement {
            p: self.p,
            coeffs: a.coeffs.iter().map(|&x| mul_mod(x, s, self.p)).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let (p, k) = (self.p, self.k);
        if k == 1 {
            return FieldElement { p: self.p, coeffs: vec![mul_mod(a.coeffs[0], b.coeffs[0], p)] };
        }
        if p < (1 << 20) {
            // Products fit comfortably; reduce each product row once.
            let mut r = vec![0u64; 2 * k - 1];
            for (i, &x) in a.coeffs.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.coeffs.iter().enumerate() {
                    r[i + j] += x * y;
                }
                if i % 64 == 63 {
                    r.iter_mut().for_each(|v| *v %= p);
                }
            }
            self.reduce_u64(r)
        } else {
            let mut r = vec![0u64; 2 * k - 1];
            for (i, &x) in a.coeffs.iter().enumerate() {
                for (j, &y) in b.coeffs.iter().enumerate() {
                    r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
                }
            }
            self.reduce_u64(r)
        }
    }

    fn reduce_u64(&self, mut r: Vec<u64>) -> FieldElement {
        let (p, k) = (self.p, self.k);
        for i in (k..r.len()).rev() {
            let c = r[i] % p;
            if c == 0 {
                continue;
            }
            for &(j, nm) in &self.neg_tail {
                let idx = i - k + j;
                r[idx] = (r[idx] % p + mul_mod(c, nm, p)) % p;
            }
        }
        r.truncate(k);
        r.iter_mut().for_each(|v| *v %= p);
        FieldElement { p, coeffs: r }
    }

    pub fn sqr(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.sqr(&r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow(a, &BigUint::from(e))
    }

    /// Multiplicative inverse via extended Euclid on F_p[t].
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let p = self.p;
        if self.k == 1 {
            return Some(FieldElement { p: self.p, coeffs: vec![pow_mod(a.coeffs[0], p - 2, p)] });
        }
        let (g, s) = fp_ext_gcd(&a.coeffs, &self.modulus, p);
        debug_assert_eq!(g.len(), 1);
        let ginv = pow_mod(g[0], p - 2, p);
        let mut out = self.zero();
        for (i, &c) in s.iter().enumerate().take(self.k) {
            out.coeffs[i] = mul_mod(c, ginv, p);
        }
        Some(out)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// The p-power Frobenius.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow_u64(a, self.p)
    }

    pub fn is_square(&self, a: &FieldElement) -> bool {
        if a.is_zero() {
            return true;
        }
        let e = (&self.order - 1u32) >> 1;
        self.pow(a, &e) == self.one()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> FieldElement {
        FieldElement { p: self.p, coeffs: (0..self.k).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    /// First element, in index order, that is not a square.
    pub fn nonsquare(&self) -> FieldElement {
        (2..)
            .map(|i| self.from_index(i))
            .find(|e| !self.is_square(e))
            .expect("odd-order field has nonsquares")
    }

    /// Elements in index order; only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.order_u64().unwrap_or(u64::MAX);
        (0..q).map(move |i| self.from_index(i))
    }
}

/// Square root, choosing the lexicographically smaller of ±x.
pub fn sqrt_fq(a: &FieldElement, f: &Field) -> Result<Option<FieldElement>> {
    f.check(a)?;
    if a.is_zero() {
        return Ok(Some(f.zero()));
    }
    if !f.is_square(a) {
        return Ok(None);
    }
    // Tonelli-Shanks with q - 1 = 2^s t.
    let qm1 = f.order() - 1u32;
    let s = qm1.trailing_zeros().unwrap_or(0);
    let t = &qm1 >> s;
    let z = f.nonsquare();
    let mut m = s;
    let mut c = f.pow(&z, &t);
    let mut x = f.pow(a, &((&t + 1u32) >> 1));
    let mut b = f.pow(a, &t);
    let one = f.one();
    while b != one {
        let mut i = 0;
        let mut b2 = b.clone();
        while b2 != one {
            b2 = f.sqr(&b2);
            i += 1;
        }
        let mut w = c.clone();
        for _ in 0..(m - i - 1) {
            w = f.sqr(&w);
        }
        x = f.mul(&x, &w);
        c = f.sqr(&w);
        b = f.mul(&b, &c);
        m = i;
    }
    let nx = f.neg(&x);
    Ok(Some(if nx < x { nx } else { x }))
}

/// A polynomial over a [`Field`], constant term first.
pub type Poly = Vec<FieldElement>;

pub fn poly_trim(f: &Field, mut g: Poly) -> Poly {
    while g.last().is_some_and(|c| c.is_zero()) {
        g.pop();
    }
    let _ = f;
    g
}

pub fn poly_mul(f: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = f.add(&r[i + j], &f.mul(x, y));
        }
    }
    poly_trim(f, r)
}

pub fn poly_sub(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = f.zero();
    let r = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    poly_trim(f, r)
}

/// Remainder of `a` modulo nonzero `m`.
pub fn poly_rem(f: &Field, a: &Poly, m: &Poly) -> Poly {
    poly_divrem(f, a, m).1
}

pub fn poly_divrem(f: &Field, a: &Poly, m: &Poly) -> (Poly, Poly) {
    let mut r = poly_trim(f, a.clone());
    let m = poly_trim(f, m.clone());
    let dm = m.len() - 1;
    let lead_inv = f.inv(&m[dm]).expect("nonzero leading coefficient");
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut quo = vec![f.zero(); r.len() - dm];
    while r.len() > dm {
        let i = r.len() - 1;
        let c = f.mul(&r[i], &lead_inv);
        let sh = i - dm;
        for (j, mj) in m.iter().enumerate() {
            r[sh + j] = f.sub(&r[sh + j], &f.mul(&c, mj));
        }
        quo[sh] = c;
        r.pop();
        r = poly_trim(f, r);
    }
    (poly_trim(f, quo), r)
}

pub fn poly_monic(f: &Field, g: &Poly) -> Poly {
    let g = poly_trim(f, g.clone());
    match g.last() {
        None => g,
        Some(l) => {
            let li = f.inv(l).expect("nonzero");
            g.iter().map(|c| f.mul(c, &li)).collect()
        }
    }
}

pub fn poly_gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let mut a = poly_trim(f, a.clone());
    let mut b = poly_trim(f, b.clone());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(f, &a)
}

pub fn poly_mulmod(f: &Field, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    poly_rem(f, &poly_mul(f, a, b), m)
}

pub fn poly_powmod(f: &Field, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let mut r = vec![f.one()];
    let base = poly_rem(f, base, m);
    for i in (0..e.bits()).rev() {
        r = poly_mulmod(f, &r, &r, m);
        if e.bit(i) {
            r = poly_mulmod(f, &r, &base, m);
        }
    }
    r
}

pub fn poly_eval(f: &Field, g: &Poly, x: &FieldElement) -> FieldElement {
    g.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// Distinct roots of `g` in F, sorted lexicographically.
pub fn poly_roots(g: &Poly, f: &Field) -> Result<Vec<FieldElement>> {
    let g = poly_trim(f, g.clone());
    if g.is_empty() {
        return invalid("the zero polynomial has no finite root set");
    }
    for c in &g {
        f.check(c)?;
    }
    if g.len() == 1 {
        return Ok(Vec::new());
    }
    let g = poly_monic(f, &g);
    let x = vec![f.zero(), f.one()];
    let xq = poly_powmod(f, &x, f.order(), &g);
    let h = poly_gcd(f, &g, &poly_sub(f, &xq, &x));
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut roots = Vec::new();
    split_linear(f, h, &mut rng, &mut roots);
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Splits a monic product of distinct linear factors.
fn split_linear(f: &Field, h: Poly, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElement>) {
    match h.len() {
        0 | 1 => return,
        2 => {
            out.push(f.neg(&h[0]));
            return;
        }
        _ => {}
    }
    let e = (f.order() - 1u32) >> 1;
    loop {
        let a = f.random(rng);
        let base = vec![a, f.one()];
        let w = poly_powmod(f, &base, &e, &h);
        let d = poly_gcd(f, &h, &poly_sub(f, &w, &vec![f.one()]));
        if d.len() > 1 && d.len() < h.len() {
            let (quo, _) = poly_divrem(f, &h, &d);
            split_linear(f, d, rng, out);
            split_linear(f, poly_monic(f, &quo), rng, out);
            return;
        }
    }
}

/// An embedding of a subfield given by the image of its generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    image_of_gen: FieldElement,
    small_k: usize,
}

impl Embedding {
    pub fn apply(&self, big: &Field, small_coeffs: &[u64]) -> FieldElement {
        let mut acc = big.zero();
        let mut pw = big.one();
        for (i, &c) in small_coeffs.iter().enumerate().take(self.small_k) {
            if c != 0 {
                acc = big.add(&acc, &big.scale(&pw, c));
            }
            if i + 1 < self.small_k {
                pw = big.mul(&pw, &self.image_of_gen);
            }
        }
        acc
    }
}

/// Embeds `small` into `big` by sending t to the smallest root of its modulus.
pub fn embed(small: &Field, big: &Field) -> Result<Embedding> {
    if small.p != big.p || big.k % small.k != 0 {
        return invalid("not a subfield");
    }
    if small.k == 1 {
        return Ok(Embedding { image_of_gen: big.zero(), small_k: 1 });
    }
    let m: Poly = small.modulus.iter().map(|&c| big.from_int(c as i64)).collect();
    let roots = poly_roots(&m, big)?;
    let r = roots.into_iter().next().ok_or_else(|| Error::Invalid("modulus has no root".into()))?;
    Ok(Embedding { image_of_gen: r, small_k: small.k })
}

// ---- polynomials over F_p with u64 coefficients (modulus search) ----

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let m = fp_trim(m.to_vec());
    let dm = m.len() - 1;
    let li = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let i = r.len() - 1;
        let c = mul_mod(r[i], li, p);
        for (j, &mj) in m.iter().enumerate() {
            let idx = i - dm + j;
            r[idx] = (r[idx] + p - mul_mod(c, mj, p)) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_rem(&r, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Returns (g, s) with g = gcd(a, m) and s·a ≡ g mod m.
fn fp_ext_gcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = fp_trim(m.to_vec());
    let mut r1 = fp_trim(a.to_vec());
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // q = r0 div r1
        let mut r = r0.clone();
        let d1 = r1.len() - 1;
        let li = pow_mod(r1[d1], p - 2, p);
        let mut q = vec![0u64; r.len().saturating_sub(d1).max(1)];
        while r.len() > d1 {
            let i = r.len() - 1;
            let c = mul_mod(r[i], li, p);
            q[i - d1] = c;
            for (j, &v) in r1.iter().enumerate() {
                let idx = i - d1 + j;
                r[idx] = (r[idx] + p - mul_mod(c, v, p)) % p;
            }
            r = fp_trim(r);
        }
        // s2 = s0 - q s1
        let mut qs = vec![0u64; q.len() + s1.len()];
        for (i, &x) in q.iter().enumerate() {
            for (j, &y) in s1.iter().enumerate() {
                qs[i + j] = (qs[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        let n = qs.len().max(s0.len());
        let s2: Vec<u64> = (0..n)
            .map(|i| (s0.get(i).copied().unwrap_or(0) + p - qs.get(i).copied().unwrap_or(0)) % p)
            .collect();
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, fp_trim(s2));
    }
    (r0, s0)
}

fn fp_powmod_x(e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let x = fp_rem(&[0, 1], m, p);
    for i in (0..e.bits()).rev() {
        r = fp_mulmod(&r, &r, m, p);
        if e.bit(i) {
            r = fp_mulmod(&r, &x, m, p);
        }
    }
    r
}

/// Rabin's test for a monic polynomial of degree k over F_p.
pub fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    let pb = BigUint::from(p);
    let xpk = fp_powmod_x(&pb.pow(k as u32), m, p);
    if fp_trim(xpk) != fp_rem(&[0, 1], m, p) {
        return false;
    }
    for (r, _) in factor(k as u64) {
        let xp = fp_powmod_x(&pb.pow((k as u64 / r) as u32), m, p);
        let mut d = xp;
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        let g = fp_gcd(m, &d, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    // Candidate i encodes (c_0, …, c_{k-1}) in base p with c_{k-1} most significant.
    let mut i: u64 = 0;
    loop {
        let mut m = vec![0u64; k + 1];
        let mut t = i;
        for c in m.iter_mut().take(k) {
            *c = t % p;
            t /= p;
        }
        m[k] = 1;
        if fp_is_irreducible(&m, p) {
            return m;
        }
        i += 1;
    }
}

// ---- small fields with packed u32 elements ----

/// A field of order q ≤ 2^26 (or any prime q < 2^31) with `u32` elements.
///
/// An element is the base-p encoding of its coefficient vector with respect
/// to the modulus of [`make_field`], so it converts losslessly to a
/// [`FieldElement`].
#[derive(Clone)]
pub struct Fq {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    field: Field,
    /// log/exp tables with respect to `generator`, only for k > 1.
    log: Vec<u32>,
    exp: Vec<u32>,
    /// Quadratic character as a table when q is small enough.
    chi_table: Vec<i8>,
    generator: u32,
}

/// Largest q for which [`Fq`] builds tables.
pub const FQ_TABLE_LIMIT: u64 = 1 << 26;

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
    }
}

impl Fq {
    /// The field of order q = p^k.
    pub fn new(q: u64) -> Result<Fq> {
        let (p, k) = crate::numth::prime_power(q)
            .ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        if k > 1 && q > FQ_TABLE_LIMIT {
            return Err(Error::Overflow(format!("q = {q} too large for a table field")));
        }
        if q >= 1 << 31 {
            return Err(Error::Overflow(format!("q = {q} exceeds 31 bits")));
        }
        let field = make_field(p, k as usize)?;
        let mut fq = Fq {
            p,
            k,
            q,
            field,
            log: Vec::new(),
            exp: Vec::new(),
            chi_table: Vec::new(),
            generator: 0,
        };
        fq.generator = fq.find_generator();
        if k > 1 {
            let mut exp = vec![0u32; (q - 1) as usize];
            let mut log = vec![0u32; q as usize];
            let g = fq.field.from_index(fq.generator as u64);
            let mut cur = fq.field.one();
            for (i, e) in exp.iter_mut().enumerate() {
                let idx = fq.field.to_index(&cur).unwrap() as u32;
                *e = idx;
                log[idx as usize] = i as u32;
                cur = fq.field.mul(&cur, &g);
            }
            fq.exp = exp;
            fq.log = log;
        }
        if q <= FQ_TABLE_LIMIT {
            let mut t = vec![-1i8; q as usize];
            t[0] = 0;
            for x in 1..q {
                let s = fq.mul(x as u32, x as u32);
                t[s as usize] = 1;
            }
            fq.chi_table = t;
        }
        Ok(fq)
    }

    fn find_generator(&self) -> u32 {
        let n = self.q - 1;
        let fac = factor(n);
        let f = &self.field;
        (2..self.q)
            .find(|&i| {
                let e = f.from_index(i);
                fac.iter().all(|&(r, _)| f.pow_u64(&e, n / r) != f.one())
            })
            .unwrap_or(1) as u32
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a as u64 + b as u64;
            return if s >= self.p { (s - self.p) as u32 } else { s as u32 };
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut r, mut pw) = (0u64, 1u64);
        while a > 0 || b > 0 {
            let s = (a % self.p + b % self.p) % self.p;
            r += s * pw;
            pw *= self.p;
            a /= self.p;
            b /= self.p;
        }
        r as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { (self.p - a as u64) as u32 };
        }
        let (mut a, mut r, mut pw) = (a as u64, 0u64, 1u64);
        while a > 0 {
            let d = a % self.p;
            r += if d == 0 { 0 } else { (self.p - d) * pw };
            pw *= self.p;
            a /= self.p;
        }
        r as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        let n = self.q - 1;
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        if self.k > 1 {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let n = self.q - 1;
            let l = (self.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return self.exp[l];
        }
        let mut r = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.k > 1 {
            let n = (self.q - 1) as u32;
            let l = self.log[a as usize];
            return Some(self.exp[((n - l) % n) as usize]);
        }
        Some(self.pow(a, self.q - 2))
    }

    /// Quadratic character: 0, 1 or −1.
    #[inline]
    pub fn chi(&self, a: u32) -> i32 {
        if !self.chi_table.is_empty() {
            return self.chi_table[a as usize] as i32;
        }
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.q - 1) / 2) == 1 { 1 } else { -1 }
    }

    /// Discrete log to base [`Fq::generator`]; requires tables or k = 1 with small q.
    pub fn log(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if self.k > 1 {
            return Some(self.log[a as usize] as u64);
        }
        let mut cur = 1u32;
        for i in 0..self.q - 1 {
            if cur == a {
                return Some(i);
            }
            cur = self.mul(cur, self.generator);
        }
        None
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let fe = self.to_fe(a);
        sqrt_fq(&fe, &self.field).ok().flatten().map(|r| self.from_fe(&r))
    }

    pub fn to_fe(&self, a: u32) -> FieldElement {
        self.field.from_index(a as u64)
    }

    pub fn from_fe(&self, a: &FieldElement) -> u32 {
        self.field.to_index(a).expect("element of a small field") as u32
    }

    pub fn is_square_q(&self) -> bool {
        self.k % 2 == 0
    }

    /// Representatives g^0, …, g^{d-1} of F*/(F*)^d for d | q − 1.
    pub fn coset_reps(&self, d: u64) -> Vec<u32> {
        let mut out = Vec::with_capacity(d as usize);
        let mut cur = 1u32;
        for _ in 0..d {
            out.push(cur);
            cur = self.mul(cur, self.generator);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_construction() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.order_u64(), Some(5));
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]);
        assert!(make_field(4, 1).is_err());
        assert!(make_field(3, 1).is_err());
        assert!(make_field(5, 0).is_err());
        assert!(make_field(7, 2000).is_err());
    }

    #[test]
    fn lex_first_modulus_oracle() {
        // Scan monic quadratics and cubics by brute-force root search.
        for p in [5u64, 7, 11] {
            for k in [2usize, 3] {
                let f = make_field(p, k).unwrap();
                let mut first = None;
                'cand: for i in 0..p.pow(k as u32) {
                    let mut m = vec![0u64; k + 1];
                    let mut t = i;
                    for c in m.iter_mut().take(k) {
                        *c = t % p;
                        t /= p;
                    }
                    m[k] = 1;
                    for x in 0..p {
                        let v = m.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                        if v == 0 {
                            continue 'cand;
                        }
                    }
                    first = Some(m);
                    break;
                }
                assert_eq!(f.modulus(), first.unwrap().as_slice());
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(sqrt_fq(&f5.zero(), &f5).unwrap(), Some(f5.zero()));
        assert_eq!(sqrt_fq(&f7.from_int(4), &f7).unwrap(), Some(f7.from_int(2)));
        assert_eq!(sqrt_fq(&f5.from_int(3), &f5).unwrap(), None);
        assert!(sqrt_fq(&f7.from_int(4), &f5).is_err());
    }

    #[test]
    fn sqrt_counts_in_small_fields() {
        for (p, k) in [(5u64, 1usize), (5, 2), (7, 3), (11, 2)] {
            let f = make_field(p, k).unwrap();
            let mut nonzero_squares = 0;
            for a in f.elements() {
                if let Some(r) = sqrt_fq(&a, &f).unwrap() {
                    assert_eq!(f.sqr(&r), a);
                    assert!(r <= f.neg(&r));
                    if !a.is_zero() {
                        nonzero_squares += 1;
                    }
                }
            }
            assert_eq!(nonzero_squares as u64, (f.order_u64().unwrap() - 1) / 2);
        }
    }

    #[test]
    fn roots_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        let x2p1 = |f: &Field| vec![f.one(), f.zero(), f.one()];
        assert_eq!(poly_roots(&x2p1(&f5), &f5).unwrap(), vec![f5.from_int(2), f5.from_int(3)]);
        assert_eq!(poly_roots(&vec![f7.from_int(-3), f7.one()], &f7).unwrap(), vec![f7.from_int(3)]);
        assert!(poly_roots(&x2p1(&f7), &f7).unwrap().is_empty());
        assert!(poly_roots(&vec![], &f7).is_err());
    }

    #[test]
    fn x_q_minus_x_splits() {
        for (p, k) in [(5u64, 2usize), (7, 2), (7, 3)] {
            let f = make_field(p, k).unwrap();
            let q = f.order_u64().unwrap() as usize;
            let mut g = vec![f.zero(); q + 1];
            g[q] = f.one();
            g[1] = f.neg(&f.one());
            let roots = poly_roots(&g, &f).unwrap();
            assert_eq!(roots.len(), q);
        }
    }

    #[test]
    fn inverse_and_frobenius() {
        let f = make_field(7, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            if let Some(ai) = f.inv(&a) {
                assert_eq!(f.mul(&a, &ai), f.one());
            }
            let lhs = f.frobenius(&f.add(&a, &b));
            let rhs = f.add(&f.frobenius(&a), &f.frobenius(&b));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn small_field_matches_generic() {
        for q in [5u64, 7, 25, 49, 125] {
            let fq = Fq::new(q).unwrap();
            let f = fq.field().clone();
            for a in 0..q as u32 {
                for b in (0..q as u32).step_by(3) {
                    let (ea, eb) = (fq.to_fe(a), fq.to_fe(b));
                    assert_eq!(fq.to_fe(fq.mul(a, b)), f.mul(&ea, &eb));
                    assert_eq!(fq.to_fe(fq.add(a, b)), f.add(&ea, &eb));
                    assert_eq!(fq.to_fe(fq.sub(a, b)), f.sub(&ea, &eb));
                }
                let want = if a == 0 { 0 } else if f.is_square(&fq.to_fe(a)) { 1 } else { -1 };
                assert_eq!(fq.chi(a), want);
                if a != 0 {
                    assert_eq!(fq.mul(a, fq.inv(a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let small = make_field(5, 2).unwrap();
        let big = make_field(5, 6).unwrap();
        let emb = embed(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements().step_by(4) {
                let lhs = emb.apply(&big, small.mul(&a, &b).coeffs());
                let rhs = big.mul(&emb.apply(&big, a.coeffs()), &emb.apply(&big, b.coeffs()));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
