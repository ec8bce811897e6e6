//! Elliptic curves y² = x³ + a4·x + a6 over F_q with p ≥ 5.
//!
//! Point counting, isomorphism-class enumeration, strata and relative
//! conductors live here; torsion bases, Frobenius matrices and Weil pairings
//! are in [`torsion`].

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gf::{FieldElement, Fq};
use crate::numth::{gcd_u64, isqrt, kronecker_symbol};
use crate::quadorders::{class_number, decompose, Discriminant};

pub mod divpoly;
pub mod matrix;
pub mod torsion;

pub use divpoly::{relative_conductor, scalar_level};
pub use matrix::Mat2;
pub use torsion::{
    count_anti_isometries, frobenius_matrix, symplectic_type, torsion_aut_size, torsion_basis,
    FrobMatrix, SymplecticType, TorsionBasis,
};

/// Largest q handled by exhaustive character-sum counting.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;
/// Largest q accepted by [`enumerate_curves`].
pub const ENUMERATION_LIMIT: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct EllipticCurve {
    fq: Arc<Fq>,
    a4: u32,
    a6: u32,
    trace: i64,
}

impl PartialEq for EllipticCurve {
    fn eq(&self, other: &Self) -> bool {
        self.fq.q == other.fq.q && self.a4 == other.a4 && self.a6 == other.a6
    }
}

impl EllipticCurve {
    /// The curve y² = x³ + a4·x + a6 with coefficients given as packed field indices.
    pub fn new(fq: Arc<Fq>, a4: u32, a6: u32) -> Result<Self> {
        if fq.p < 5 {
            return invalid("characteristic must be at least 5");
        }
        if a4 as u64 >= fq.q || a6 as u64 >= fq.q {
            return invalid("coefficient outside the field");
        }
        if discriminant(&fq, a4, a6) == 0 {
            return invalid(format!("singular curve a4={a4} a6={a6} over F_{}", fq.q));
        }
        let n = point_count_raw(&fq, a4, a6)?;
        let trace = fq.q as i64 + 1 - n as i64;
        Ok(EllipticCurve { fq, a4, a6, trace })
    }

    /// Convenience constructor from integer coefficients over a new field of order q.
    pub fn from_ints(q: u64, a4: i64, a6: i64) -> Result<Self> {
        let fq = Arc::new(Fq::new(q)?);
        let (a4, a6) = (fq.from_int(a4), fq.from_int(a6));
        Self::new(fq, a4, a6)
    }

    pub fn fq(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn q(&self) -> u64 {
        self.fq.q
    }

    pub fn p(&self) -> u64 {
        self.fq.p
    }

    pub fn a4_index(&self) -> u32 {
        self.a4
    }

    pub fn a6_index(&self) -> u32 {
        self.a6
    }

    pub fn a4(&self) -> FieldElement {
        self.fq.to_fe(self.a4)
    }

    pub fn a6(&self) -> FieldElement {
        self.fq.to_fe(self.a6)
    }

    pub fn trace(&self) -> i64 {
        self.trace
    }

    pub fn is_ordinary(&self) -> bool {
        self.trace.rem_euclid(self.fq.p as i64) != 0
    }

    pub fn j_invariant(&self) -> u32 {
        let f = &self.fq;
        let a3 = f.mul(4, f.pow(self.a4, 3));
        let num = f.mul(f.from_int(1728), a3);
        f.mul(num, f.inv(discriminant(f, self.a4, self.a6)).unwrap())
    }

    /// Right-hand side x³ + a4·x + a6.
    pub fn rhs(&self, x: u32) -> u32 {
        let f = &self.fq;
        f.add(f.mul(f.add(f.mul(x, x), self.a4), x), self.a6)
    }

    /// The quadratic twist by a nonsquare.
    pub fn twist(&self) -> Result<EllipticCurve> {
        let f = &self.fq;
        let d = f.generator();
        let d2 = f.mul(d, d);
        EllipticCurve::new(self.fq.clone(), f.mul(self.a4, d2), f.mul(self.a6, f.mul(d2, d)))
    }
}

/// 4a4³ + 27a6² as a field element.
fn discriminant(f: &Fq, a4: u32, a6: u32) -> u32 {
    f.add(
        f.mul(f.from_int(4), f.pow(a4, 3)),
        f.mul(f.from_int(27), f.mul(a6, a6)),
    )
}

/// #E(F_q) = q + 1 − a(E).
pub fn point_count(e: &EllipticCurve) -> u64 {
    (e.q() as i64 + 1 - e.trace) as u64
}

fn point_count_raw(fq: &Fq, a4: u32, a6: u32) -> Result<u64> {
    if fq.q <= EXHAUSTIVE_LIMIT {
        Ok(point_count_exhaustive(fq, a4, a6))
    } else {
        point_count_bsgs(fq, a4, a6)
    }
}

/// q + 1 + Σ_x χ(x³ + a4·x + a6).
pub fn point_count_exhaustive(fq: &Fq, a4: u32, a6: u32) -> u64 {
    let mut s: i64 = 0;
    if fq.k == 1 {
        let p = fq.p;
        let (a4, a6) = (a4 as u64, a6 as u64);
        for x in 0..p {
            let v = ((x * x % p + a4) % p * x + a6) % p;
            s += fq.chi(v as u32) as i64;
        }
    } else {
        for x in 0..fq.q as u32 {
            let v = fq.add(fq.mul(fq.add(fq.mul(x, x), a4), x), a6);
            s += fq.chi(v) as i64;
        }
    }
    (fq.q as i64 + 1 + s) as u64
}

// ---- affine points over Fq ----

pub(crate) type Pt = Option<(u32, u32)>;

pub(crate) fn pt_add(f: &Fq, a4: u32, p: Pt, q: Pt) -> Pt {
    let ((x1, y1), (x2, y2)) = match (p, q) {
        (None, _) => return q,
        (_, None) => return p,
        (Some(a), Some(b)) => (a, b),
    };
    let lambda = if x1 == x2 {
        if y1 != y2 || y1 == 0 {
            return None;
        }
        let num = f.add(f.mul(3, f.mul(x1, x1)), a4);
        f.mul(num, f.inv(f.add(y1, y1)).unwrap())
    } else {
        f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)).unwrap())
    };
    let x3 = f.sub(f.sub(f.mul(lambda, lambda), x1), x2);
    let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
    Some((x3, y3))
}

pub(crate) fn pt_neg(f: &Fq, p: Pt) -> Pt {
    p.map(|(x, y)| (x, f.neg(y)))
}

pub(crate) fn pt_mul(f: &Fq, a4: u32, p: Pt, mut n: u64) -> Pt {
    let mut r = None;
    let mut b = p;
    while n > 0 {
        if n & 1 == 1 {
            r = pt_add(f, a4, r, b);
        }
        b = pt_add(f, a4, b, b);
        n >>= 1;
    }
    r
}

fn random_point<R: Rng>(f: &Fq, a4: u32, a6: u32, rng: &mut R) -> (u32, u32) {
    loop {
        let x = rng.gen_range(0..f.q) as u32;
        let v = f.add(f.mul(f.add(f.mul(x, x), a4), x), a6);
        if v != 0 && f.chi(v) == 1 {
            return (x, f.sqrt(v).unwrap());
        }
    }
}

/// Group orders m in the Hasse interval with m·P = O.
fn hasse_candidates(f: &Fq, a4: u32, pt: (u32, u32)) -> Vec<u64> {
    let q = f.q;
    let t = isqrt(4 * q);
    let (lo, hi) = (q + 1 - t, q + 1 + t);
    let w = isqrt(hi - lo + 1) + 1;
    let p = Some(pt);
    let mut table: HashMap<(u32, u32), u64> = HashMap::with_capacity(w as usize);
    let mut cur = p;
    for j in 1..=w {
        match cur {
            None => {
                // P has order j: every multiple of j in range.
                let first = lo.div_ceil(j) * j;
                return (first..=hi).step_by(j as usize).collect();
            }
            Some(c) => {
                table.entry(c).or_insert(j);
            }
        }
        cur = pt_add(f, a4, cur, p);
    }
    let giant = pt_mul(f, a4, p, w);
    let mut r = pt_mul(f, a4, p, lo);
    let mut out = Vec::new();
    let mut m0 = lo;
    while m0 <= hi {
        match r {
            None => out.push(m0),
            Some(_) => {
                if let Some(&j) = table.get(&pt_neg(f, r).unwrap()) {
                    if m0 + j <= hi {
                        out.push(m0 + j);
                    }
                }
            }
        }
        r = pt_add(f, a4, r, giant);
        m0 += w;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Mestre-style baby-step giant-step on the curve and its twist.
pub fn point_count_bsgs(f: &Fq, a4: u32, a6: u32) -> Result<u64> {
    let seed = f.q ^ ((a4 as u64) << 20) ^ ((a6 as u64) << 42);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = f.generator();
    let d2 = f.mul(d, d);
    let (ta4, ta6) = (f.mul(a4, d2), f.mul(a6, f.mul(d2, d)));
    let twist_sum = 2 * f.q + 2;
    let mut cands: Option<Vec<u64>> = None;
    for round in 0..40 {
        let mut found: Vec<u64> = if round % 2 == 0 {
            hasse_candidates(f, a4, random_point(f, a4, a6, &mut rng))
        } else {
            hasse_candidates(f, ta4, random_point(f, ta4, ta6, &mut rng))
                .into_iter()
                .map(|m| twist_sum - m)
                .collect()
        };
        found.sort_unstable();
        let next: Vec<u64> = match cands {
            None => found,
            Some(c) => c.into_iter().filter(|m| found.binary_search(m).is_ok()).collect(),
        };
        if next.len() == 1 {
            return Ok(next[0]);
        }
        if next.is_empty() {
            break;
        }
        cands = Some(next);
    }
    if f.q <= 1_000_000 {
        return Ok(point_count_exhaustive(f, a4, a6));
    }
    Err(Error::Undetermined(format!("BSGS could not isolate #E over F_{}", f.q)))
}

// ---- isomorphism classes ----

/// One representative per F_q-isomorphism class, with weight 1/#Aut.
pub fn enumerate_curves(q: u64) -> Result<Vec<(EllipticCurve, Ratio<u64>)>> {
    if q > ENUMERATION_LIMIT {
        return Err(Error::Overflow(format!("q = {q} exceeds the enumeration limit {ENUMERATION_LIMIT}")));
    }
    let fq = Arc::new(Fq::new(q)?);
    if fq.p < 5 {
        return invalid("characteristic must be at least 5");
    }
    enumerate_curves_in(&fq)
}

pub fn enumerate_curves_in(fq: &Arc<Fq>) -> Result<Vec<(EllipticCurve, Ratio<u64>)>> {
    let f = fq.as_ref();
    let q = f.q;
    let mut out = Vec::with_capacity(2 * q as usize + 10);
    let j1728 = f.from_int(1728);
    let d = f.generator();
    let (d2, d3) = (f.mul(d, d), f.mul(f.mul(d, d), d));
    let half = Ratio::new(1, 2);
    for j in 1..q as u32 {
        if j == j1728 {
            continue;
        }
        let k = f.mul(j, f.inv(f.sub(j1728, j)).unwrap());
        let (a4, a6) = (f.mul(3, k), f.mul(2, k));
        out.push((EllipticCurve::new(fq.clone(), a4, a6)?, half));
        out.push((EllipticCurve::new(fq.clone(), f.mul(a4, d2), f.mul(a6, d3))?, half));
    }
    let g6 = gcd_u64(6, q - 1);
    for b in f.coset_reps(g6) {
        out.push((EllipticCurve::new(fq.clone(), 0, b)?, Ratio::new(1, g6)));
    }
    let g4 = gcd_u64(4, q - 1);
    for a in f.coset_reps(g4) {
        out.push((EllipticCurve::new(fq.clone(), a, 0)?, Ratio::new(1, g4)));
    }
    Ok(out)
}

/// Number of supersingular curves over F_{p²} with a given trace ±2p.
pub fn supersingular_trace0_count(p: u64) -> Result<u64> {
    if p < 5 || !crate::numth::is_prime(p) {
        return invalid(format!("{p} is not a prime >= 5"));
    }
    let pi = p as i64;
    let n = pi + 6 - 4 * kronecker_symbol(-3, pi) as i64 - 3 * kronecker_symbol(-4, pi) as i64;
    Ok((n / 12) as u64)
}

// ---- strata ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub q: u64,
    pub trace: i64,
    pub order_disc: Discriminant,
    pub relcond: u64,
    pub size: u64,
}

/// Δ_{a,q} = a² − 4q decomposed; errors for non-Weil or quaternionic traces.
pub fn frobenius_discriminant(q: u64, a: i64) -> Result<Discriminant> {
    let delta = a * a - 4 * q as i64;
    if delta > 0 {
        return invalid(format!("{a} is not a Weil trace for q = {q}"));
    }
    if delta == 0 {
        return invalid(format!("a = {a} has a² = 4q: endomorphisms form a quaternion order"));
    }
    decompose(delta)
}

/// The strata I(F_q, a, O) of the isogeny class of trace a.
///
/// Ordinary a and the supersingular traces 0 and ±√q (q square) are
/// supported; quaternionic classes and characteristic 2, 3 traces are not.
pub fn strata(q: u64, a: i64) -> Result<Vec<Stratum>> {
    let (p, k) = crate::numth::prime_power(q)
        .ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
    if p < 5 {
        return invalid("characteristic must be at least 5");
    }
    let disc = frobenius_discriminant(q, a)?;
    let ordinary = a.rem_euclid(p as i64) != 0;
    let square_row = k % 2 == 0 && (a == 0 || a * a == q as i64);
    if !ordinary && a != 0 && !square_row {
        return invalid(format!("no elliptic curves over F_{q} have trace {a}"));
    }
    let f = disc.conductor;
    let mut out = Vec::new();
    for g in crate::numth::FactoredInteger::new(f)?.divisors() {
        if g % p == 0 {
            continue;
        }
        let od = disc.with_conductor(g);
        let size = if square_row {
            (1 - kronecker_symbol(disc.fundamental, p as i64) as i64) as u64
        } else {
            class_number(od.delta)?
        };
        if size == 0 {
            continue;
        }
        out.push(Stratum { q, trace: a, order_disc: od, relcond: f / g, size });
    }
    out.sort_by_key(|s| s.order_disc.conductor);
    Ok(out)
}

/// Σ relcond(E) over ordinary E/F_q, from class numbers alone.
///
/// Per trace this is Σ_{g | f} (f/g)·h(g²Δ*), with h the class number of the
/// order (units included).
pub fn sum_relcond_closed_form(q: u64) -> Result<u64> {
    let (p, _) = crate::numth::prime_power(q)
        .ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
    if p < 5 {
        return invalid("characteristic must be at least 5");
    }
    let t = isqrt(4 * q) as i64;
    let mut total = 0u64;
    for a in -t..=t {
        if a.rem_euclid(p as i64) == 0 {
            continue;
        }
        total += relcond_sum_for_trace(q, a)?;
    }
    Ok(total)
}

/// Σ relcond(E) over ordinary E/F_q by enumerating isomorphism classes.
pub fn sum_relcond_enumerated(q: u64) -> Result<u64> {
    let mut total = 0;
    for (e, _) in enumerate_curves(q)? {
        if e.is_ordinary() {
            total += relative_conductor(&e)?;
        }
    }
    Ok(total)
}

/// Σ relcond over the ordinary isogeny class of trace a.
pub fn relcond_sum_for_trace(q: u64, a: i64) -> Result<u64> {
    Ok(strata(q, a)?.iter().map(|s| s.relcond * s.size).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_count_examples() {
        let e = EllipticCurve::from_ints(5, 1, 0).unwrap();
        assert_eq!(point_count(&e), 4);
        assert!(e.is_ordinary());
        let e = EllipticCurve::from_ints(5, 0, 1).unwrap();
        assert_eq!(point_count(&e), 6);
        assert!(!e.is_ordinary());
        let e = EllipticCurve::from_ints(25, 1, 0).unwrap();
        assert_eq!(point_count(&e), 32);
        assert!(EllipticCurve::from_ints(7, 0, 0).is_err());
    }

    #[test]
    fn bsgs_matches_exhaustive() {
        for q in [5003u64, 10007, 7u64.pow(5)] {
            let f = Fq::new(q).unwrap();
            for (a4, a6) in [(1u32, 1u32), (2, 3), (0, 5), (7, 0), (11, 13)] {
                if discriminant(&f, a4, a6) == 0 {
                    continue;
                }
                assert_eq!(
                    point_count_bsgs(&f, a4, a6).unwrap(),
                    point_count_exhaustive(&f, a4, a6),
                    "q={q} a4={a4} a6={a6}"
                );
            }
        }
    }

    #[test]
    fn mass_formula() {
        for q in [5u64, 7, 11, 13, 25, 49, 125] {
            let classes = enumerate_curves(q).unwrap();
            let mass: Ratio<u64> = classes.iter().map(|(_, w)| *w).sum();
            assert_eq!(mass, Ratio::from_integer(q), "q={q}");
        }
    }

    #[test]
    fn classes_are_distinct() {
        // Brute force: group all (a4, a6) by an isomorphism-invariant key and compare counts.
        let q = 13u64;
        let fq = Fq::new(q).unwrap();
        let classes = enumerate_curves(q).unwrap();
        let mut seen = std::collections::HashSet::new();
        for (e, _) in &classes {
            let mut orbit: Vec<(u32, u32)> = (1..q as u32)
                .map(|u| {
                    let u2 = fq.mul(u, u);
                    let u4 = fq.mul(u2, u2);
                    (fq.mul(e.a4_index(), u4), fq.mul(e.a6_index(), fq.mul(u4, u2)))
                })
                .collect();
            orbit.sort_unstable();
            assert!(seen.insert(orbit[0]), "duplicate class");
        }
    }

    #[test]
    fn strata_examples() {
        let s = strata(11, 4).unwrap();
        let discs: Vec<i64> = s.iter().map(|x| x.order_disc.delta).collect();
        assert_eq!(discs, vec![-7, -28]);
        assert_eq!(s.iter().map(|x| x.size).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(s.iter().map(|x| x.relcond).collect::<Vec<_>>(), vec![2, 1]);
        let s = strata(7, 3).unwrap();
        assert_eq!((s.len(), s[0].order_disc.delta, s[0].size), (1, -19, 1));
        assert_eq!(strata(5, 1).unwrap().len(), 1);
        assert!(strata(11, 7).is_err());
        assert!(strata(25, 10).is_err());
        assert_eq!(relcond_sum_for_trace(11, 4).unwrap(), 3);
    }

    #[test]
    fn supersingular_formula_matches_square_field_enumeration() {
        for p in [5u64, 7, 11, 13] {
            let classes = enumerate_curves(p * p).unwrap();
            let n = classes.iter().filter(|(e, _)| e.trace() == 2 * p as i64).count() as u64;
            assert_eq!(supersingular_trace0_count(p).unwrap(), n, "p={p}");
        }
        assert_eq!(supersingular_trace0_count(5).unwrap(), 1);
        assert_eq!(supersingular_trace0_count(7).unwrap(), 1);
        assert_eq!(supersingular_trace0_count(11).unwrap(), 2);
    }
}
