//! Quartic Weil polynomials T⁴ − a1·T³ + a2·T² − q·a1·T + q² of abelian surfaces.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numth::prime_power;

/// Extension degrees tried by [`is_geometrically_split`].
pub const GEOMETRIC_SWEEP: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeilQuartic {
    pub p: u64,
    /// q = p^m.
    pub m: u32,
    pub q: BigInt,
    pub a1: BigInt,
    pub a2: BigInt,
}

impl fmt::Display for WeilQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^4 - ({})T^3 + ({})T^2 - ({})T + {}", self.a1, self.a2, &self.q * &self.a1, &self.q * &self.q)
    }
}

fn split_q(q: u64) -> Result<(u64, u32)> {
    prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))
}

impl WeilQuartic {
    /// Checks the Weil bounds |a1| ≤ 4√q and 2|a1|√q − 2q ≤ a2 ≤ a1²/4 + 2q.
    pub fn new(q: u64, a1: i64, a2: i64) -> Result<WeilQuartic> {
        let (p, m) = split_q(q)?;
        let w = WeilQuartic { p, m, q: q.into(), a1: a1.into(), a2: a2.into() };
        w.check()?;
        Ok(w)
    }

    fn check(&self) -> Result<()> {
        let (q, a1, a2) = (&self.q, &self.a1, &self.a2);
        let a1sq = a1 * a1;
        if a1sq > BigInt::from(16) * q {
            return invalid(format!("|a1| = {} exceeds 4 sqrt(q)", a1.abs()));
        }
        let upper = &a1sq + BigInt::from(8) * q;
        if BigInt::from(4) * a2 > upper {
            return invalid(format!("a2 = {a2} exceeds a1^2/4 + 2q"));
        }
        let shifted = a2 + BigInt::from(2) * q;
        if shifted.is_negative() || BigInt::from(4) * &a1sq * q > &shifted * &shifted {
            return invalid(format!("a2 = {a2} is below 2|a1|sqrt(q) - 2q"));
        }
        Ok(())
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    /// The quartic with roots the k-th powers of these roots (Newton power sums).
    pub fn base_extend(&self, k: u32) -> Result<WeilQuartic> {
        if k == 0 {
            return invalid("extension degree must be at least 1");
        }
        Ok(self.extend_with(&power_sums(self, 2 * k as usize), k))
    }

    /// Base extension to degree k from precomputed power sums up to 2k.
    fn extend_with(&self, s: &[BigInt], k: u32) -> WeilQuartic {
        let pk = s[k as usize].clone();
        let a2 = (&pk * &pk - &s[2 * k as usize]) / 2;
        WeilQuartic { p: self.p, m: self.m * k, q: self.q.pow(k), a1: pk, a2 }
    }

    /// Whether every root has slope 1/2: ord_p(a1) ≥ m/2 and ord_p(a2) ≥ m.
    pub fn is_supersingular(&self) -> bool {
        let ord = |x: &BigInt| -> u32 {
            if x.is_zero() {
                return u32::MAX;
            }
            let mut x = x.clone();
            let p = BigInt::from(self.p);
            let mut v = 0;
            while (&x % &p).is_zero() {
                x /= &p;
                v += 1;
            }
            v
        };
        2 * ord(&self.a1).min(u32::MAX / 2) >= self.m && ord(&self.a2) >= self.m
    }
}

/// Power sums p_0..p_upto of the four roots.
fn power_sums(w: &WeilQuartic, upto: usize) -> Vec<BigInt> {
    let e = [w.a1.clone(), w.a2.clone(), &w.q * &w.a1, &w.q * &w.q];
    let mut p: Vec<BigInt> = vec![BigInt::from(4)];
    for k in 1..=upto {
        // Newton: p_k = Σ_{i=1}^{min(k,4)} (−1)^{i−1} e_i p_{k−i}, with k·e_k when k ≤ 4.
        let mut acc = BigInt::zero();
        for i in 1..=k.min(4) {
            let term = if i == k { &e[i - 1] * BigInt::from(k) } else { &e[i - 1] * &p[k - i] };
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p
}

/// The quartic (a1, a2) for a curve with N1 points over F_q and N2 over F_{q²}.
pub fn quartic_from_counts(q: u64, n1: u64, n2: u64) -> Result<WeilQuartic> {
    let (qi, n1, n2) = (q as i128, n1 as i128, n2 as i128);
    let a1 = qi + 1 - n1;
    let num = a1 * a1 - (qi * qi + 1 - n2);
    if num % 2 != 0 {
        return invalid(format!("counts ({n1}, {n2}) give odd a1^2 - (q^2 + 1 - N2) = {num}"));
    }
    let a2 = num / 2;
    let small = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow(format!("{v} overflows i64")));
    WeilQuartic::new(q, small(a1)?, small(a2)?)
}

/// Whether T² − sT + q is the Weil polynomial of an elliptic curve over F_q (q = p^m).
pub fn elliptic_admissible_pm(p: u64, m: u32, q: &BigInt, s: &BigInt) -> bool {
    let s2 = s * s;
    if s2 > BigInt::from(4) * q {
        return false;
    }
    if !(s % BigInt::from(p)).is_zero() {
        return true;
    }
    let square = m % 2 == 0;
    if s.is_zero() {
        return !square || p % 4 != 1;
    }
    if square {
        return (&s2 == q && p % 3 != 1) || s2 == BigInt::from(4) * q;
    }
    (p == 2 && s2 == BigInt::from(2) * q) || (p == 3 && s2 == BigInt::from(3) * q)
}

pub fn elliptic_admissible(q: u64, s: i64) -> bool {
    match prime_power(q) {
        Some((p, m)) => elliptic_admissible_pm(p, m, &q.into(), &s.into()),
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SplitTag {
    Simple,
    OrdinaryNonisotypic,
    OrdinaryIsotypic,
    AlmostOrdinary,
    SupersingularSplit,
}

impl SplitTag {
    pub const ALL: [SplitTag; 5] = [
        SplitTag::Simple,
        SplitTag::OrdinaryNonisotypic,
        SplitTag::OrdinaryIsotypic,
        SplitTag::AlmostOrdinary,
        SplitTag::SupersingularSplit,
    ];

    pub fn is_split(self) -> bool {
        self != SplitTag::Simple
    }

    pub fn name(self) -> &'static str {
        match self {
            SplitTag::Simple => "simple",
            SplitTag::OrdinaryNonisotypic => "ordinary_nonisotypic",
            SplitTag::OrdinaryIsotypic => "ordinary_isotypic",
            SplitTag::AlmostOrdinary => "almost_ordinary",
            SplitTag::SupersingularSplit => "supersingular_split",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitClass {
    pub tag: SplitTag,
    /// Elliptic traces (s, t), s ≥ t, with s + t = a1 and st = a2 − 2q.
    pub factors: Option<(BigInt, BigInt)>,
}

impl SplitClass {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "class": self.tag.name(),
            "split": self.tag.is_split(),
            "factors": self.factors.as_ref().map(|(s, t)| vec![s.to_string(), t.to_string()]),
        })
    }
}

/// Integer roots s ≥ t of y² − a1·y + (a2 − 2q), if any.
pub fn integer_factor_traces(w: &WeilQuartic) -> Option<(BigInt, BigInt)> {
    let disc = &w.a1 * &w.a1 - BigInt::from(4) * (&w.a2 - BigInt::from(2) * &w.q);
    if disc.is_negative() {
        return None;
    }
    let r = Roots::sqrt(&disc);
    let parity: BigInt = (&w.a1 + &r) % 2;
    if &r * &r != disc || !parity.is_zero() {
        return None;
    }
    Some(((&w.a1 + &r) / 2, (&w.a1 - &r) / 2))
}

pub fn classify_quartic(w: &WeilQuartic) -> SplitClass {
    let simple = SplitClass { tag: SplitTag::Simple, factors: None };
    let Some((s, t)) = integer_factor_traces(w) else {
        return simple;
    };
    let adm = |x: &BigInt| elliptic_admissible_pm(w.p, w.m, &w.q, x);
    if !adm(&s) || !adm(&t) {
        return simple;
    }
    let p = BigInt::from(w.p);
    let ord = |x: &BigInt| !(x % &p).is_zero();
    let tag = match (ord(&s), ord(&t)) {
        (true, true) if s != t => SplitTag::OrdinaryNonisotypic,
        (true, true) => SplitTag::OrdinaryIsotypic,
        (true, false) | (false, true) => SplitTag::AlmostOrdinary,
        (false, false) => SplitTag::SupersingularSplit,
    };
    SplitClass { tag, factors: Some((s, t)) }
}

/// Split classification of (q, a1, a2).
pub fn classify(q: u64, a1: i64, a2: i64) -> Result<SplitClass> {
    Ok(classify_quartic(&WeilQuartic::new(q, a1, a2)?))
}

/// Whether the quartic factors over ℤ into quadratics with exactly one elliptic factor.
pub fn has_mixed_factorization(w: &WeilQuartic) -> bool {
    match integer_factor_traces(w) {
        None => false,
        Some((s, t)) => {
            let adm = |x: &BigInt| elliptic_admissible_pm(w.p, w.m, &w.q, x);
            adm(&s) != adm(&t)
        }
    }
}

pub fn base_extend(q: u64, a1: i64, a2: i64, k: u32) -> Result<WeilQuartic> {
    WeilQuartic::new(q, a1, a2)?.base_extend(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeometricSplit {
    pub split: bool,
    /// Smallest k ≤ the sweep bound with a split base extension.
    pub witness: Option<u32>,
    /// Split because the quartic is supersingular.
    pub supersingular: bool,
    /// Sweep bound used.
    pub sweep: u32,
}

/// Split over some F_{q^k}, k ≤ 24, or supersingular.
pub fn is_geometrically_split(q: u64, a1: i64, a2: i64) -> Result<GeometricSplit> {
    geometric_split_quartic(&WeilQuartic::new(q, a1, a2)?, GEOMETRIC_SWEEP)
}

pub fn geometric_split_quartic(w: &WeilQuartic, sweep: u32) -> Result<GeometricSplit> {
    let sums = power_sums(w, 2 * sweep as usize);
    for k in 1..=sweep {
        let ext = if k == 1 { w.clone() } else { w.extend_with(&sums, k) };
        if classify_quartic(&ext).tag.is_split() {
            return Ok(GeometricSplit { split: true, witness: Some(k), supersingular: w.is_supersingular(), sweep });
        }
    }
    let ss = w.is_supersingular();
    Ok(GeometricSplit { split: ss, witness: None, supersingular: ss, sweep })
}

/// Weil polynomial x⁴ − b·x² + q² of the restriction of scalars of a curve over F_{q²} with trace b.
pub fn res_scalars_quartic(q: u64, b: i64) -> Result<WeilQuartic> {
    if b.unsigned_abs() > 2 * q {
        return invalid(format!("|b| = {} exceeds 2q", b.abs()));
    }
    WeilQuartic::new(q, 0, -b)
}
