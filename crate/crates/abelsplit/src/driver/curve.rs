//! Genus-2 curves y² = f(x) over ℚ with integer coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::numth::primes_up_to;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGenus2 {
    f: Vec<i64>,
    disc: BigInt,
}

impl RationalGenus2 {
    /// `f` lists coefficients from the constant term up.
    pub fn new(f: &[i64]) -> Result<RationalGenus2> {
        let mut f = f.to_vec();
        while f.last() == Some(&0) {
            f.pop();
        }
        let deg = f.len().saturating_sub(1);
        if !(deg == 5 || deg == 6) {
            return invalid(format!("degree must be 5 or 6, got {deg}"));
        }
        let disc = discriminant(&f);
        if disc.is_zero() {
            return invalid("f is not squarefree");
        }
        Ok(RationalGenus2 { f, disc })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn lead(&self) -> i64 {
        self.f[self.degree()]
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// f mod p, constant term first.
    pub fn reduce(&self, p: u64) -> Vec<u64> {
        self.f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect()
    }

    pub fn is_good(&self, p: u64) -> bool {
        p >= 5 && (self.lead() % p as i64) != 0 && !(&self.disc % BigInt::from(p)).is_zero()
    }

    /// Primes 5 ≤ p ≤ z not dividing the leading coefficient or the discriminant.
    pub fn good_primes(&self, z: u64) -> Vec<u64> {
        if z < 5 {
            return Vec::new();
        }
        primes_up_to(z).into_iter().filter(|&p| self.is_good(p)).collect()
    }
}

impl fmt::Display for RationalGenus2 {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.f.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.unsigned_abs();
            let coef = if a == 1 && i > 0 { String::new() } else { a.to_string() };
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            write!(out, "{sign}{coef}{mono}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for RationalGenus2 {
    type Err = Error;

    /// Parses sums of terms like `3x^2`, `-x`, `7`, `x^5`; `*` and spaces are allowed.
    fn from_str(s: &str) -> Result<RationalGenus2> {
        let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if s.is_empty() {
            return invalid("empty polynomial");
        }
        let mut coeffs = vec![0i64; 7];
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        for t in terms {
            let (neg, body) = match t.as_bytes().first() {
                Some(b'-') => (true, &t[1..]),
                Some(b'+') => (false, &t[1..]),
                _ => (false, t),
            };
            let bad = || Error::Invalid(format!("cannot parse term {t:?}"));
            let (c, e) = match body.find('x') {
                None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some(k) => {
                    let c = if k == 0 { 1 } else { body[..k].parse::<i64>().map_err(|_| bad())? };
                    let rest = &body[k + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            if e > 6 {
                return invalid(format!("degree {e} term in {s:?}"));
            }
            coeffs[e] += if neg { -c } else { c };
        }
        RationalGenus2::new(&coeffs)
    }
}

/// disc(f) = (−1)^{n(n−1)/2} Res(f, f′) / lead(f).
pub fn discriminant(f: &[i64]) -> BigInt {
    let n = f.len() - 1;
    let df: Vec<i64> = (1..=n).map(|i| f[i] * i as i64).collect();
    let res = resultant(f, &df);
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    let (q, r) = res.div_rem(&BigInt::from(f[n]));
    debug_assert!(r.is_zero());
    q * sign
}

/// Determinant of the Sylvester matrix, by fraction-free elimination.
fn resultant(a: &[i64], b: &[i64]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, &c) in a.iter().rev().enumerate() {
            r[i + j] = c.into();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, &c) in b.iter().rev().enumerate() {
            r[i + j] = c.into();
        }
        rows.push(r);
    }
    bareiss(rows)
}

fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Integer part of disc, for display; None if it does not fit.
pub fn disc_i128(c: &RationalGenus2) -> Option<i128> {
    let d = c.disc();
    if d.abs().bits() < 127 {
        d.to_i128()
    } else {
        None
    }
}
