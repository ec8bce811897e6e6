//! Fast Jacobian arithmetic for y² = x⁵ + f4·x⁴ + … + f0 over a prime field.
//!
//! Divisor classes are reduced Mumford pairs stored inline, so the BSGS loops
//! never allocate. Generic additions and doublings use the usual
//! one-inversion formulas; every other case goes through Cantor's algorithm on
//! small vectors.

use rand::Rng;

use crate::numth::{inv_mod, isqrt, kronecker_symbol, sqrt_mod};

/// A reduced divisor: u = x² + u1·x + u0 (deg 2), x + u0 (deg 1) or 1 (deg 0),
/// and v = v1·x + v0 with deg v < deg u.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Div {
    pub deg: u8,
    pub u1: u64,
    pub u0: u64,
    pub v1: u64,
    pub v0: u64,
}

impl Div {
    pub const ZERO: Div = Div { deg: 0, u1: 0, u0: 0, v1: 0, v0: 0 };

    pub fn is_zero(&self) -> bool {
        self.deg == 0
    }

    fn key(&self) -> u128 {
        (self.deg as u128) << 124 | (self.u1 as u128) << 93 | (self.u0 as u128) << 62 | (self.v1 as u128) << 31 | self.v0 as u128
    }
}

/// The Jacobian of y² = f with f monic of degree 5 over F_p, 5 ≤ p < 2³¹.
#[derive(Clone, Debug)]
pub struct QuinticJacobian {
    p: u64,
    f: [u64; 6],
}

impl QuinticJacobian {
    /// `f` is reduced mod p, constant term first, with f[5] = 1.
    pub fn new(p: u64, f: [u64; 6]) -> Option<QuinticJacobian> {
        (p >= 5 && p < 1 << 31 && f[5] == 1).then_some(QuinticJacobian { p, f })
    }

    /// The monic model of y² = f for any f of degree 5 (via x ↦ x/c, c the leading coefficient).
    pub fn monic_model(p: u64, f: &[u64]) -> Option<QuinticJacobian> {
        if f.len() != 6 || f[5] % p == 0 {
            return None;
        }
        let c = f[5] % p;
        let mut g = [0u64; 6];
        let mut pw = 1u64;
        for i in (0..5).rev() {
            g[i] = f[i] % p * pw % p;
            pw = pw * c % p;
        }
        g[5] = 1;
        QuinticJacobian::new(p, g)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> &[u64; 6] {
        &self.f
    }

    #[inline]
    fn m(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    fn s(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline]
    fn a(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    fn eval(&self, x: u64) -> u64 {
        self.f.iter().rev().fold(0, |acc, &c| (acc * x + c) % self.p)
    }

    pub fn neg(&self, d: &Div) -> Div {
        Div { v1: self.s(0, d.v1), v0: self.s(0, d.v0), ..*d }
    }

    pub fn is_valid(&self, d: &Div) -> bool {
        let (u, v) = self.to_polys(d);
        let r = psub(&self.f, &pmul(&v, &v, self.p), self.p);
        pdivrem(&r, &u, self.p).1.is_empty()
    }

    pub fn add(&self, a: &Div, b: &Div) -> Div {
        if a.is_zero() {
            return *b;
        }
        if b.is_zero() {
            return *a;
        }
        if a.deg == 2 && b.deg == 2 {
            let fast = if a == b { self.fast_double(a) } else { self.fast_add(a, b) };
            if let Some(d) = fast {
                return d;
            }
        }
        self.cantor(a, b)
    }

    pub fn double(&self, a: &Div) -> Div {
        self.add(a, a)
    }

    pub fn mul(&self, a: &Div, n: u64) -> Div {
        let mut r = Div::ZERO;
        for i in (0..64 - n.leading_zeros()).rev() {
            r = self.double(&r);
            if (n >> i) & 1 == 1 {
                r = self.add(&r, a);
            }
        }
        r
    }

    /// s = s′/det with s′ = (w1·x + w0)·(−r1·x + r0 − r1·c1) mod x² + c1·x + c0,
    /// i.e. w / (r1·x + r0) mod that quadratic. Returns (s1, s0, 1/s1).
    fn solve(&self, r1: u64, r0: u64, c1: u64, c0: u64, w1: u64, w0: u64) -> Option<(u64, u64, u64)> {
        let t = self.s(r0, self.m(r1, c1));
        let det = self.a(self.m(r0, t), self.m(self.m(r1, r1), c0));
        let s1p = self.s(self.m(w1, r0), self.m(w0, r1));
        if det == 0 || s1p == 0 {
            return None;
        }
        let s0p = self.a(self.m(self.m(w1, r1), c0), self.m(w0, t));
        let inv = inv_mod(self.m(det, s1p), self.p)?;
        let idet = self.m(s1p, inv);
        let is1 = self.m(self.m(det, det), inv);
        Some((self.m(s1p, idet), self.m(s0p, idet), is1))
    }

    /// Reduces V = va + ua·s against U = ua·ub, where V² ≡ f mod U.
    fn finish(&self, ua: (u64, u64), va: (u64, u64), ub: (u64, u64), s: (u64, u64, u64)) -> Div {
        let (s1, s0, is1) = s;
        let (a1, a0) = ua;
        let v3 = s1;
        let v2 = self.a(s0, self.m(a1, s1));
        let v1 = self.a(self.a(self.m(a1, s0), self.m(a0, s1)), va.0);
        let v0 = self.a(self.m(a0, s0), va.1);
        let big3 = self.a(a1, ub.0);
        let big2 = self.a(self.a(a0, ub.1), self.m(a1, ub.0));
        let n6 = self.m(v3, v3);
        let n5 = self.s(self.m(2 * v3 % self.p, v2), 1);
        let n4 = self.s(self.a(self.m(v2, v2), self.m(2 * v3 % self.p, v1)), self.f[4]);
        let q1 = self.s(n5, self.m(n6, big3));
        let q0 = self.s(self.s(n4, self.m(n6, big2)), self.m(q1, big3));
        let iq2 = self.m(is1, is1);
        let u1 = self.m(q1, iq2);
        let u0 = self.m(q0, iq2);
        // V mod u, using x³ ≡ (u1² − u0)·x + u1·u0
        let r1 = self.s(self.a(v1, self.m(v3, self.s(self.m(u1, u1), u0))), self.m(v2, u1));
        let r0 = self.s(self.a(v0, self.m(v3, self.m(u1, u0))), self.m(v2, u0));
        Div { deg: 2, u1, u0, v1: self.s(0, r1), v0: self.s(0, r0) }
    }

    fn fast_add(&self, a: &Div, b: &Div) -> Option<Div> {
        let r1 = self.s(a.u1, b.u1);
        let r0 = self.s(a.u0, b.u0);
        let w1 = self.s(b.v1, a.v1);
        let w0 = self.s(b.v0, a.v0);
        let s = self.solve(r1, r0, b.u1, b.u0, w1, w0)?;
        Some(self.finish((a.u1, a.u0), (a.v1, a.v0), (b.u1, b.u0), s))
    }

    fn fast_double(&self, a: &Div) -> Option<Div> {
        let (u1, u0) = (a.u1, a.u0);
        // k = ((f − v²)/u) mod u
        let k3 = 1;
        let k2 = self.s(self.f[4], u1);
        let k1 = self.s(self.s(self.f[3], self.m(u1, k2)), u0);
        let n2 = self.s(self.f[2], self.m(a.v1, a.v1));
        let k0 = self.s(self.s(n2, self.m(u1, k1)), self.m(u0, k2));
        let w1 = self.s(self.a(k1, self.m(k3, self.s(self.m(u1, u1), u0))), self.m(k2, u1));
        let w0 = self.s(self.a(k0, self.m(k3, self.m(u1, u0))), self.m(k2, u0));
        let s = self.solve(2 * a.v1 % self.p, 2 * a.v0 % self.p, u1, u0, w1, w0)?;
        Some(self.finish((u1, u0), (a.v1, a.v0), (u1, u0), s))
    }

    fn to_polys(&self, d: &Div) -> (Vec<u64>, Vec<u64>) {
        match d.deg {
            0 => (vec![1], Vec::new()),
            1 => (vec![d.u0, 1], ptrim(vec![d.v0])),
            _ => (vec![d.u0, d.u1, 1], ptrim(vec![d.v0, d.v1])),
        }
    }

    fn from_polys(&self, u: &[u64], v: &[u64]) -> Div {
        let g = |i: usize| v.get(i).copied().unwrap_or(0);
        match u.len() {
            1 => Div::ZERO,
            2 => Div { deg: 1, u1: 0, u0: u[0], v1: 0, v0: g(0) },
            _ => Div { deg: 2, u1: u[1], u0: u[0], v1: g(1), v0: g(0) },
        }
    }

    /// Cantor's composition and reduction, for the non-generic cases.
    fn cantor(&self, a: &Div, b: &Div) -> Div {
        let p = self.p;
        let (u1, v1) = self.to_polys(a);
        let (u2, v2) = self.to_polys(b);
        let (d0, e1, e2) = pxgcd(&u1, &u2, p);
        let (d, c1, c2) = pxgcd(&d0, &padd(&v1, &v2, p), p);
        let s1 = pmul(&c1, &e1, p);
        let s2 = pmul(&c1, &e2, p);
        let dd = pmul(&d, &d, p);
        let mut u = pdivrem(&pmul(&u1, &u2, p), &dd, p).0;
        let mut num = pmul(&pmul(&s1, &u1, p), &v2, p);
        num = padd(&num, &pmul(&pmul(&s2, &u2, p), &v1, p), p);
        num = padd(&num, &pmul(&c2, &padd(&pmul(&v1, &v2, p), &self.f, p), p), p);
        let mut v = pdivrem(&pdivrem(&num, &d, p).0, &u, p).1;
        while u.len() > 3 {
            let r = psub(&self.f, &pmul(&v, &v, p), p);
            u = pmonic(&pdivrem(&r, &u, p).0, p);
            v = pdivrem(&pneg(&v, p), &u, p).1;
        }
        self.from_polys(&u, &v)
    }

    fn random_point<R: Rng>(&self, rng: &mut R) -> Option<(u64, u64)> {
        for _ in 0..256 {
            let x = rng.gen_range(0..self.p);
            let fx = self.eval(x);
            if fx != 0 && kronecker_symbol(fx as i64, self.p as i64) == 1 {
                return Some((x, sqrt_mod(fx, self.p)?));
            }
        }
        None
    }

    /// The class of P + Q − 2∞ for random rational points P, Q with distinct x.
    pub fn random<R: Rng>(&self, rng: &mut R) -> Option<Div> {
        let (x1, y1) = self.random_point(rng)?;
        for _ in 0..16 {
            let (x2, y2) = self.random_point(rng)?;
            if x2 == x1 {
                continue;
            }
            let slope = self.m(self.s(y2, y1), inv_mod(self.s(x2, x1), self.p)?);
            return Some(Div {
                deg: 2,
                u1: self.s(0, self.a(x1, x2)),
                u0: self.m(x1, x2),
                v1: slope,
                v0: self.s(y1, self.m(slope, x1)),
            });
        }
        None
    }

    /// Offsets j ∈ [0, len] with (n0 + j)·D = 0, by baby-step giant-step.
    pub fn annihilating_offsets(&self, d: &Div, n0: u64, len: u64) -> Vec<u64> {
        let w = isqrt(len + 1) + 1;
        let mut baby: Vec<(u128, u64)> = Vec::with_capacity(w as usize);
        let mut cur = Div::ZERO;
        for r in 0..w {
            baby.push((cur.key(), r));
            cur = self.add(&cur, d);
        }
        baby.sort_unstable();
        let giant = cur;
        let mut t = self.mul(d, n0);
        let mut out = Vec::new();
        let mut i = 0u64;
        while i * w <= len {
            let k = self.neg(&t).key();
            let start = baby.partition_point(|e| e.0 < k);
            for &(_, r) in baby[start..].iter().take_while(|e| e.0 == k) {
                let j = i * w + r;
                if j <= len {
                    out.push(j);
                }
            }
            t = self.add(&t, &giant);
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

/// X⁶·f(x0 + 1/X) for a sextic f with f(x0) = 0: a quintic model with the
/// point (x0, 0) at infinity.
pub fn move_root_to_infinity(p: u64, f: &[u64], x0: u64) -> Vec<u64> {
    let mut g = vec![0u64; 7];
    for (i, &fi) in f.iter().enumerate() {
        // (1 + x0·X)^i · X^(6 − i)
        let mut binom = 1u64;
        let mut pw = 1u64;
        for j in 0..=i {
            let k = 6 - i + j;
            g[k] = (g[k] + fi % p * binom % p * pw) % p;
            binom = binom * (i - j) as u64 / (j + 1) as u64;
            pw = pw * x0 % p;
        }
    }
    debug_assert_eq!(g[6], 0);
    g.truncate(6);
    g
}

fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn padd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    ptrim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p).collect())
}

fn pneg(a: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|&c| (p - c) % p).collect()
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    padd(a, &pneg(b, p), p)
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(out)
}

fn pmonic(a: &[u64], p: u64) -> Vec<u64> {
    let li = inv_mod(*a.last().unwrap(), p).unwrap();
    a.iter().map(|&c| c * li % p).collect()
}

fn pdivrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = ptrim(a.to_vec());
    if r.len() < m.len() {
        return (Vec::new(), r);
    }
    let li = inv_mod(*m.last().unwrap(), p).unwrap();
    let mut q = vec![0u64; r.len() - m.len() + 1];
    while r.len() >= m.len() && !r.is_empty() {
        let shift = r.len() - m.len();
        let c = r[r.len() - 1] * li % p;
        q[shift] = c;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mc % p) % p;
        }
        r = ptrim(r);
    }
    (ptrim(q), r)
}

/// (g, s, t) with g = s·a + t·b monic.
fn pxgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&q, &s1, p), p);
        let t2 = psub(&t0, &pmul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    let li = inv_mod(*r0.last().unwrap(), p).unwrap();
    let sc = |v: &[u64]| ptrim(v.iter().map(|&c| c * li % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_jac(p: u64, rng: &mut ChaCha8Rng) -> QuinticJacobian {
        loop {
            let mut f = [0u64; 6];
            for c in f.iter_mut().take(5) {
                *c = rng.gen_range(0..p);
            }
            f[5] = 1;
            let fv = f.to_vec();
            let df: Vec<u64> = (1..6).map(|i| f[i] * i as u64 % p).collect();
            if pxgcd(&fv, &df, p).0.len() == 1 {
                return QuinticJacobian::new(p, f).unwrap();
            }
        }
    }

    #[test]
    fn fast_formulas_agree_with_cantor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [7u64, 31, 1009, 65537] {
            let jac = random_jac(p, &mut rng);
            for _ in 0..300 {
                let a = jac.random(&mut rng).unwrap();
                let b = jac.mul(&jac.random(&mut rng).unwrap(), rng.gen_range(1..40));
                assert!(jac.is_valid(&a) && jac.is_valid(&b));
                assert_eq!(jac.add(&a, &b), jac.cantor(&a, &b));
                assert_eq!(jac.double(&a), jac.cantor(&a, &a));
                assert!(jac.add(&a, &jac.neg(&a)).is_zero());
            }
        }
    }

    #[test]
    fn group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let jac = random_jac(10007, &mut rng);
        for _ in 0..1000 {
            let a = jac.random(&mut rng).unwrap();
            let b = jac.random(&mut rng).unwrap();
            let c = jac.mul(&jac.random(&mut rng).unwrap(), 3);
            assert_eq!(jac.add(&a, &b), jac.add(&b, &a));
            assert_eq!(jac.add(&jac.add(&a, &b), &c), jac.add(&a, &jac.add(&b, &c)));
        }
    }

    #[test]
    fn moved_model_has_same_count() {
        let p = 103u64;
        let count = |g: &[u64]| -> i64 {
            (0..p)
                .map(|x| {
                    let v = g.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                    kronecker_symbol(v as i64, p as i64) as i64
                })
                .sum()
        };
        // (x − 3)·(x⁵ + 2x + 7) has the rational root 3
        let f = [p - 21, 1, 2, 0, 0, p - 3, 1];
        let g = move_root_to_infinity(p, &f, 3);
        assert_ne!(g[5], 0);
        // affine count of f plus 2 points at infinity equals that of g plus 1
        assert_eq!(count(&f) + 2, count(&g) + 1);
    }

    #[test]
    fn monic_model_is_isomorphic() {
        // y² = 3x⁵ + x + 6 over F_101 and its monic model have the same number of points
        let p = 101u64;
        let f = [6u64, 1, 0, 0, 0, 3];
        let jac = QuinticJacobian::monic_model(p, &f).unwrap();
        let count = |g: &[u64]| {
            (0..p)
                .map(|x| {
                    let v = g.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                    1 + kronecker_symbol(v as i64, p as i64) as i64
                })
                .sum::<i64>()
        };
        assert_eq!(count(&f), count(jac.f()));
    }
}
