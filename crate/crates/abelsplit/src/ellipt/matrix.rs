//! 2×2 matrices over ℤ/n.

use serde::Serialize;

use crate::numth::{factor, gcd_u64};

/// The matrix [[a, b], [c, d]] over ℤ/n; columns are images of basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Mat2 {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

fn red(x: i64, n: u64) -> u64 {
    x.rem_euclid(n as i64) as u64
}

impl Mat2 {
    pub fn new(n: u64, a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2 { n, a: red(a, n), b: red(b, n), c: red(c, n), d: red(d, n) }
    }

    pub fn identity(n: u64) -> Mat2 {
        Mat2::scalar(n, 1)
    }

    pub fn scalar(n: u64, s: i64) -> Mat2 {
        Mat2::new(n, s, 0, 0, s)
    }

    /// Companion matrix of T² − t·T + d.
    pub fn companion(n: u64, t: i64, d: i64) -> Mat2 {
        Mat2::new(n, 0, -d, 1, t)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        debug_assert_eq!(self.n, o.n);
        let n = self.n as u128;
        let f = |x: u64, y: u64, z: u64, w: u64| ((x as u128 * y as u128 + z as u128 * w as u128) % n) as u64;
        Mat2 {
            n: self.n,
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }

    pub fn trace(&self) -> u64 {
        (self.a + self.d) % self.n
    }

    pub fn det(&self) -> u64 {
        let n = self.n as i128;
        ((self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128).rem_euclid(n)) as u64
    }

    pub fn is_invertible(&self) -> bool {
        self.n == 1 || gcd_u64(self.det(), self.n) == 1
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    /// Reduction modulo a divisor m of n.
    pub fn reduce(&self, m: u64) -> Mat2 {
        assert_eq!(self.n % m, 0);
        Mat2 { n: m, a: self.a % m, b: self.b % m, c: self.c % m, d: self.d % m }
    }

    /// Multiplicative order of an invertible matrix.
    pub fn order(&self) -> u64 {
        assert!(self.is_invertible());
        let id = Mat2::identity(self.n);
        let mut cur = *self;
        let mut k = 1;
        while cur != id {
            cur = cur.mul(self);
            k += 1;
        }
        k
    }

    /// Combines matrices modulo pairwise coprime moduli.
    pub fn crt(parts: &[Mat2]) -> Mat2 {
        let mut acc = Mat2::identity(1);
        for m in parts {
            let n = acc.n * m.n;
            let c = |x: u64, y: u64| crt2(x, acc.n, y, m.n);
            acc = Mat2 { n, a: c(acc.a, m.a), b: c(acc.b, m.b), c: c(acc.c, m.c), d: c(acc.d, m.d) };
        }
        acc
    }
}

fn crt2(x: u64, m: u64, y: u64, n: u64) -> u64 {
    // x + m·t ≡ y (mod n)
    let mi = modinv(m % n, n);
    let t = ((y + n - x % n) % n) * mi % n;
    x + m * t
}

fn modinv(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (n as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(n as i64) as u64
}

/// #GL₂(ℤ/n).
pub fn gl2_order(n: u64) -> u64 {
    let mut r = n.pow(4);
    for (l, _) in factor(n) {
        r = r / (l * l * l) * (l - 1) * (l * l - 1);
    }
    r
}

/// All invertible matrices over ℤ/n.
pub fn gl2(n: u64) -> impl Iterator<Item = Mat2> {
    (0..n.pow(4)).filter_map(move |i| {
        let m = Mat2 { n, a: i % n, b: i / n % n, c: i / n / n % n, d: i / n / n / n };
        m.is_invertible().then_some(m)
    })
}

fn centralizer_size_brute(g: &Mat2) -> u64 {
    gl2(g.n).filter(|m| m.mul(g) == g.mul(m)).count() as u64
}

/// Size of the centralizer of g in GL₂(ℤ/n), computed prime power by prime power.
pub fn centralizer_size(g: &Mat2) -> u64 {
    if g.n == 1 {
        return 1;
    }
    factor(g.n)
        .into_iter()
        .map(|(l, e)| centralizer_size_brute(&g.reduce(l.pow(e))))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_orders() {
        assert_eq!(gl2_order(3), 48);
        assert_eq!(gl2(3).count(), 48);
        assert_eq!(gl2(4).count() as u64, gl2_order(4));
        assert_eq!(gl2(6).count() as u64, gl2_order(6));
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer_size(&Mat2::scalar(3, 2)), 48);
        // Distinct eigenvalues: split torus of size (l - 1)^2.
        for l in [5u64, 7] {
            assert_eq!(centralizer_size(&Mat2::new(l, 1, 0, 0, 2)), (l - 1) * (l - 1));
        }
        // Irreducible: nonsplit torus of size l^2 - 1.
        assert_eq!(centralizer_size(&Mat2::companion(5, 0, 2)), 24);
        assert_eq!(centralizer_size(&Mat2::identity(1)), 1);
    }

    #[test]
    fn crt_roundtrip() {
        let a = Mat2::new(4, 1, 2, 3, 1);
        let b = Mat2::new(9, 4, 0, 7, 2);
        let m = Mat2::crt(&[a, b]);
        assert_eq!(m.n, 36);
        assert_eq!(m.reduce(4), a);
        assert_eq!(m.reduce(9), b);
        assert_eq!(Mat2::companion(7, 3, 5).trace(), 3);
        assert_eq!(Mat2::companion(7, 3, 5).det(), 5);
    }
}
