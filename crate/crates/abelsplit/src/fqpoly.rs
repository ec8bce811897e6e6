//! Dense polynomials over an [`Fq`], coefficients as `u32`, constant term first.

use crate::gf::Fq;

pub type P = Vec<u32>;

pub fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &[u32]) -> isize {
    a.iter().rposition(|&c| c != 0).map_or(-1, |i| i as isize)
}

pub fn constant(c: u32) -> P {
    trim(vec![c])
}

pub fn add(f: &Fq, a: &[u32], b: &[u32]) -> P {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
            .collect(),
    )
}

pub fn sub(f: &Fq, a: &[u32], b: &[u32]) -> P {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
            .collect(),
    )
}

pub fn neg(f: &Fq, a: &[u32]) -> P {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn scale(f: &Fq, a: &[u32], s: u32) -> P {
    trim(a.iter().map(|&c| f.mul(c, s)).collect())
}

pub fn mul(f: &Fq, a: &[u32], b: &[u32]) -> P {
    let (a, b) = (&a[..(deg(a) + 1) as usize], &b[..(deg(b) + 1) as usize]);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if f.k == 1 {
        // Accumulate in u64 and reduce lazily.
        let p = f.p;
        let mut r = vec![0u64; a.len() + b.len() - 1];
        let budget = (u64::MAX / ((p - 1) * (p - 1)).max(1)).min(1 << 20) as usize;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] += x as u64 * y as u64;
            }
            if (i + 1) % budget == 0 {
                r.iter_mut().for_each(|v| *v %= p);
            }
        }
        return trim(r.into_iter().map(|v| (v % p) as u32).collect());
    }
    let mut r = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    trim(r)
}

/// Quotient and remainder; `m` must be nonzero.
pub fn divrem(f: &Fq, a: &[u32], m: &[u32]) -> (P, P) {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let li = f.inv(m[dm]).expect("nonzero divisor");
    let mut r = trim(a.to_vec());
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - dm];
    while r.len() > dm {
        let i = r.len() - 1;
        let c = f.mul(r[i], li);
        q[i - dm] = c;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                r[i - dm + j] = f.sub(r[i - dm + j], f.mul(c, mj));
            }
        }
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(f: &Fq, a: &[u32], m: &[u32]) -> P {
    let dm = deg(m);
    if deg(a) < dm {
        return trim(a.to_vec());
    }
    if f.k == 1 && dm >= 0 {
        return rem_prime(f, a, m);
    }
    divrem(f, a, m).1
}

/// Remainder over a prime field with lazy reduction.
fn rem_prime(f: &Fq, a: &[u32], m: &[u32]) -> P {
    let p = f.p;
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let li = f.inv(m[dm]).unwrap() as u64;
    let neg_m: Vec<u64> = m[..dm].iter().map(|&c| (p - c as u64) % p).collect();
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let mut i = r.len();
    while i > dm {
        i -= 1;
        let c = (r[i] % p) * li % p;
        r[i] = 0;
        if c != 0 {
            let base = i - dm;
            for (j, &nm) in neg_m.iter().enumerate() {
                let v = r[base + j] + c * nm;
                r[base + j] = if v >= 1 << 62 { v % p } else { v };
            }
        }
    }
    r.truncate(dm);
    trim(r.into_iter().map(|v| (v % p) as u32).collect())
}

pub fn monic(f: &Fq, a: &[u32]) -> P {
    let a = trim(a.to_vec());
    match a.last() {
        None => a,
        Some(&l) => scale(f, &a, f.inv(l).unwrap()),
    }
}

pub fn gcd(f: &Fq, a: &[u32], b: &[u32]) -> P {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns (g, s, t) with s·a + t·b = g monic.
pub fn ext_gcd(f: &Fq, a: &[u32], b: &[u32]) -> (P, P, P) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u32], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u32]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, trim(s0), trim(t0)),
        Some(&l) => {
            let li = f.inv(l).unwrap();
            (scale(f, &r0, li), scale(f, &s0, li), scale(f, &t0, li))
        }
    }
}

pub fn mulmod(f: &Fq, a: &[u32], b: &[u32], m: &[u32]) -> P {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Fq, base: &[u32], mut e: u64, m: &[u32]) -> P {
    let mut result = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    result
}

pub fn eval(f: &Fq, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn derivative(f: &Fq, a: &[u32]) -> P {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect(),
    )
}

pub fn is_squarefree(f: &Fq, a: &[u32]) -> bool {
    let d = derivative(f, a);
    deg(a) >= 0 && deg(&gcd(f, a, &d)) == 0
}

/// Number of distinct roots of `a` in the field, via gcd with x^q − x.
pub fn count_roots(f: &Fq, a: &[u32]) -> usize {
    let a = monic(f, a);
    if deg(&a) <= 0 {
        return 0;
    }
    let xq = powmod(f, &[0, 1], f.q, &a);
    let h = gcd(f, &a, &sub(f, &xq, &[0, 1]));
    deg(&h).max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        for q in [7u64, 25, 101] {
            let f = Fq::new(q).unwrap();
            let a: P = (0..9).map(|i| ((i * 7 + 3) % q) as u32).collect();
            let m: P = vec![2, 0, 5 % q as u32, 1];
            let (quo, r) = divrem(&f, &a, &m);
            assert_eq!(add(&f, &mul(&f, &quo, &m), &r), trim(a.clone()));
            assert!(deg(&r) < deg(&m));
            assert_eq!(rem(&f, &a, &m), r);
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = Fq::new(31).unwrap();
        let a = mul(&f, &[1, 1], &[3, 0, 1]);
        let b = mul(&f, &[1, 1], &[5, 2]);
        let (g, s, t) = ext_gcd(&f, &a, &b);
        assert_eq!(g, vec![1, 1]);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b)), g);
    }

    #[test]
    fn root_counting() {
        let f = Fq::new(5).unwrap();
        // x^3 + x = x(x - 2)(x - 3) over F_5
        assert_eq!(count_roots(&f, &[0, 1, 0, 1]), 3);
        assert_eq!(count_roots(&f, &[1, 0, 1]), 2);
        let f7 = Fq::new(7).unwrap();
        assert_eq!(count_roots(&f7, &[1, 0, 1]), 0);
        assert!(is_squarefree(&f7, &[1, 0, 1]));
        assert!(!is_squarefree(&f7, &mul(&f7, &[1, 1], &[1, 1])));
    }
}
