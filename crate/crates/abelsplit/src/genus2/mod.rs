//! Genus-2 curves y² = f(x) over F_q, p ≥ 5, with deg f ∈ {5, 6}.
//!
//! Point counts over F_q and F_{q²} give the Weil coefficients (a1, a2);
//! for larger q the Jacobian order comes from baby-step giant-step in
//! [`jacobian`]. The c_q / d_q censuses are in [`census`] and the weighted
//! isomorphism-class enumeration in [`classes`].

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::fqpoly::{self as fp, P};
use crate::gf::Fq;
use crate::numth::isqrt;

pub mod census;
pub mod classes;
pub mod jacobian;
pub mod quintic;

pub use census::{exact_cq, monte_carlo_cq, split_census, CensusResult};
pub use classes::enumerate_genus2_weighted;
pub use jacobian::{a2_candidates, a2_from_jacobian, cantor_add, jacobian_order, Jacobian, MumfordDivisor};

/// Largest q^k counted exhaustively by [`genus2_count`].
pub const COUNT_LIMIT: u64 = 10_000_000;
/// Largest q for which [`weil_coeffs`] may fall back to counting over F_{q²}.
pub const N2_FALLBACK_LIMIT: u64 = 3000;
/// Below this q, [`weil_coeffs`] takes a2 from the F_{q²} count directly.
pub const N2_DIRECT_LIMIT: u64 = 500;

#[derive(Clone, Debug)]
pub struct Genus2Curve {
    fq: Arc<Fq>,
    f: P,
}

impl PartialEq for Genus2Curve {
    fn eq(&self, other: &Self) -> bool {
        self.fq.q == other.fq.q && self.f == other.f
    }
}

impl Genus2Curve {
    /// The curve y² = f(x); `f` holds packed field indices, constant term first.
    pub fn new(fq: Arc<Fq>, f: P) -> Result<Self> {
        if fq.p < 5 {
            return invalid("characteristic must be at least 5");
        }
        if f.iter().any(|&c| c as u64 >= fq.q) {
            return invalid("coefficient outside the field");
        }
        let f = fp::trim(f);
        let d = fp::deg(&f);
        if d != 5 && d != 6 {
            return invalid(format!("degree {d} is not 5 or 6"));
        }
        if !fp::is_squarefree(&fq, &f) {
            return invalid("f is not squarefree");
        }
        Ok(Genus2Curve { fq, f })
    }

    /// Integer coefficients reduced into the prime field, constant term first.
    pub fn from_ints(q: u64, coeffs: &[i64]) -> Result<Self> {
        let fq = Arc::new(Fq::new(q)?);
        let f = coeffs.iter().map(|&c| fq.from_int(c)).collect();
        Genus2Curve::new(fq, f)
    }

    pub fn fq(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn q(&self) -> u64 {
        self.fq.q
    }

    pub fn f(&self) -> &[u32] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn lead(&self) -> u32 {
        *self.f.last().unwrap()
    }

    /// The quadratic twist y² = d·f(x).
    pub fn twist_by(&self, d: u32) -> Result<Genus2Curve> {
        if d == 0 {
            return invalid("twist by zero");
        }
        Genus2Curve::new(self.fq.clone(), fp::scale(&self.fq, &self.f, d))
    }

    /// Points at infinity over F_{q^k}.
    fn infinite_points(&self, k: u32) -> u64 {
        if self.degree() == 5 {
            1
        } else if k % 2 == 0 || self.fq.chi(self.lead()) == 1 {
            2
        } else {
            0
        }
    }
}

/// #C(F_{q^k}) for k ∈ {1, 2} by character sums.
pub fn genus2_count(c: &Genus2Curve, k: u32) -> Result<u64> {
    let fq = c.fq.as_ref();
    let q = fq.q;
    match k {
        1 => {
            if q > COUNT_LIMIT {
                return Err(Error::Overflow(format!("q = {q} too large to count")));
            }
            Ok(count_n1(fq, &c.f) + c.infinite_points(1))
        }
        2 => {
            if q.checked_mul(q).map_or(true, |qq| qq > COUNT_LIMIT) {
                return Err(Error::Overflow(format!("q² = {q}² too large to count")));
            }
            Ok(count_n2_affine(fq, &c.f) + c.infinite_points(2))
        }
        _ => invalid(format!("k = {k} is not 1 or 2")),
    }
}

/// Affine points over F_q.
fn count_n1(fq: &Fq, f: &[u32]) -> u64 {
    let s: i64 = if fq.k == 1 {
        let g: Vec<u64> = f.iter().map(|&c| c as u64).collect();
        char_sum_prime(fq.q, &g).0
    } else {
        (0..fq.q as u32).map(|x| fq.chi(fp::eval(fq, f, x)) as i64).sum()
    };
    (fq.q as i64 + s) as u64
}

/// Σ_x χ(f(x)) over F_p for prime p, and the smallest root of f if any.
///
/// Values of f come from forward differences and χ from a bitmap of squares,
/// so the loop uses additions only.
pub fn char_sum_prime(p: u64, f: &[u64]) -> (i64, Option<u64>) {
    let mut squares = vec![0u64; p as usize / 64 + 1];
    let mut sq = 0u64;
    for x in 1..=(p - 1) / 2 {
        sq += 2 * x - 1;
        if sq >= p {
            sq -= p;
        }
        if sq >= p {
            sq -= p;
        }
        squares[sq as usize >> 6] |= 1 << (sq & 63);
    }
    let d = f.len().saturating_sub(1);
    match d {
        5 if p < 1 << 24 => walk::<5>(p, f, &squares),
        6 if p < 1 << 24 => walk::<6>(p, f, &squares),
        _ => {
            let (mut sum, mut root) = (0i64, None);
            for x in 0..p {
                let v = f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
                if v == 0 {
                    root.get_or_insert(x);
                } else {
                    sum += if squares[v as usize >> 6] >> (v & 63) & 1 == 1 { 1 } else { -1 };
                }
            }
            (sum, root)
        }
    }
}

/// Independent forward-difference walkers per [`walk`] call.
const LANES: usize = 16;

/// The forward-difference loop of [`char_sum_prime`] for a fixed degree, run
/// as independent walkers over consecutive blocks so the adds interleave.
fn walk<const D: usize>(p: u64, f: &[u64], squares: &[u64]) -> (i64, Option<u64>) {
    let block = p / LANES as u64;
    let eval_at = |x: u64| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
    let mut diff = [[0i32; LANES]; 8];
    for lane in 0..LANES {
        let x0 = lane as u64 * block;
        let mut vals = [0u64; 8];
        for (k, v) in vals.iter_mut().enumerate().take(D + 1) {
            *v = eval_at((x0 + k as u64) % p);
        }
        for k in 1..=D {
            for i in (k..=D).rev() {
                vals[i] = (vals[i] + p - vals[i - 1]) % p;
            }
        }
        for i in 0..=D {
            diff[i][lane] = vals[i] as i32;
        }
    }
    let (mut ones, mut zeros) = (0u64, 0u64);
    let mut root = u64::MAX;
    let bit = |v: u64| squares[v as usize >> 6] >> (v & 63) & 1;
    for step in 0..block {
        for lane in 0..LANES {
            let v = diff[0][lane] as u64;
            ones += bit(v);
            if v == 0 {
                zeros += 1;
                root = root.min(lane as u64 * block + step);
            }
        }
        for i in 0..D {
            for lane in 0..LANES {
                // p < 2²⁴ here, so i32 lanes cannot overflow
                let s = diff[i][lane] + diff[i + 1][lane];
                let t = s - p as i32;
                diff[i][lane] = if t >= 0 { t } else { s };
            }
        }
    }
    for x in LANES as u64 * block..p {
        let v = eval_at(x);
        ones += bit(v);
        if v == 0 {
            zeros += 1;
            root = root.min(x);
        }
    }
    // square(0) is never set, so ones counts nonzero squares
    (2 * ones as i64 - (p - zeros) as i64, (root != u64::MAX).then_some(root))
}

/// Affine points over F_{q²}: x ∈ F_q, plus one conjugate pair per monic
/// irreducible X² − tX + n, where f(ω) = αω + β has norm β² + αβt + α²n.
fn count_n2_affine(fq: &Fq, f: &[u32]) -> u64 {
    let q = fq.q as u32;
    let mut total: i64 = 0;
    for x in 0..q {
        total += if fp::eval(fq, f, x) == 0 { 1 } else { 2 };
    }
    let four = fq.from_int(4);
    for t in 0..q {
        let tt = fq.mul(t, t);
        for n in 0..q {
            if fq.chi(fq.sub(tt, fq.mul(four, n))) != -1 {
                continue;
            }
            let (mut al, mut be) = (0u32, 0u32);
            for &c in f.iter().rev() {
                let na = fq.add(fq.mul(al, t), be);
                be = fq.sub(c, fq.mul(al, n));
                al = na;
            }
            let norm = fq.add(fq.add(fq.mul(be, be), fq.mul(fq.mul(al, be), t)), fq.mul(fq.mul(al, al), n));
            total += 2 + 2 * fq.chi(norm) as i64;
        }
    }
    total as u64
}

/// a1 = q + 1 − #C(F_q).
pub fn weil_a1(c: &Genus2Curve) -> Result<i64> {
    let n1 = genus2_count(c, 1)?;
    let a1 = c.q() as i64 + 1 - n1 as i64;
    debug_assert!((a1 * a1) as u64 <= 16 * c.q());
    Ok(a1)
}

/// (a1, a2) from the counts #C(F_q) and #C(F_{q²}).
pub fn weil_coeffs_exhaustive(c: &Genus2Curve) -> Result<(i64, i64)> {
    let q = c.q() as i64;
    let n1 = genus2_count(c, 1)? as i64;
    let n2 = genus2_count(c, 2)? as i64;
    let a1 = q + 1 - n1;
    Ok((a1, (a1 * a1 - (q * q + 1 - n2)) / 2))
}

/// (a1, a2): a1 from #C(F_q); a2 from #C(F_{q²}) for small q, otherwise from
/// the Jacobian order.
pub fn weil_coeffs(c: &Genus2Curve) -> Result<(i64, i64)> {
    if c.q() <= N2_DIRECT_LIMIT {
        return weil_coeffs_exhaustive(c);
    }
    if c.fq.k == 1 {
        let f: Vec<u64> = c.f.iter().map(|&x| x as u64).collect();
        return weil_coeffs_prime(c.q(), &f);
    }
    let a1 = weil_a1(c)?;
    let a2 = jacobian::a2_from_jacobian(c, a1)?;
    Ok((a1, a2))
}

/// [`weil_coeffs`] for y² = f over a prime field, without building field tables
/// when p is large. `f` is reduced mod p, squarefree, of degree 5 or 6.
pub fn weil_coeffs_prime(p: u64, f: &[u64]) -> Result<(i64, i64)> {
    let deg = f.iter().rposition(|&c| c != 0).unwrap_or(0);
    if p < 5 || !(deg == 5 || deg == 6) {
        return invalid(format!("need p ≥ 5 and degree 5 or 6, got p = {p}, degree {deg}"));
    }
    let f = &f[..=deg];
    if p <= N2_DIRECT_LIMIT {
        return weil_coeffs_exhaustive(&Genus2Curve::from_ints(p, &f.iter().map(|&c| c as i64).collect::<Vec<_>>())?);
    }
    if p > COUNT_LIMIT {
        return Err(Error::Overflow(format!("p = {p} too large to count")));
    }
    let (s, root) = char_sum_prime(p, f);
    let inf = if deg == 5 { 1 } else { 1 + crate::numth::kronecker_symbol(f[6] as i64, p as i64) as i64 };
    let a1 = -s - inf + 1;
    let a2 = jacobian::a2_prime(p, f, a1, root)?;
    Ok((a1, a2))
}

/// Range of a2 allowed by the Weil bounds once a1 is known.
pub fn a2_bounds(q: u64, a1: i64) -> (i64, i64) {
    let q = q as i128;
    let a1 = a1 as i128;
    let hi = (a1 * a1 + 8 * q).div_euclid(4);
    // smallest a2 with a2 + 2q ≥ 0 and (a2 + 2q)² ≥ 4·a1²·q
    let target = (4 * a1 * a1 * q) as u64;
    let mut r = isqrt(target) as i128;
    if r * r < target as i128 {
        r += 1;
    }
    ((r - 2 * q) as i64, hi as i64)
}

/// f(x0 + 1/X)·X⁶, a model where the points over x = x0 sit at infinity.
pub fn move_to_infinity(fq: &Fq, f: &[u32], x0: u32) -> P {
    let lin: P = vec![1, x0];
    let mut out: P = Vec::new();
    let mut pow_lin: P = vec![1];
    for (i, &c) in f.iter().enumerate() {
        if c != 0 {
            let mut term = fp::scale(fq, &pow_lin, c);
            let mut shifted = vec![0u32; 6 - i];
            shifted.append(&mut term);
            out = fp::add(fq, &out, &shifted);
        }
        pow_lin = fp::mul(fq, &pow_lin, &lin);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(q: u64, f: &[i64], k: u32) -> u64 {
        // prime-field coefficients keep their index inside F_{q^k}
        let big = Fq::new(q.pow(k)).unwrap();
        let coeffs: Vec<u32> = f.iter().map(|&c| big.from_int(c)).collect();
        let mut n = 0u64;
        for x in 0..big.q as u32 {
            let v = fp::eval(&big, &coeffs, x);
            n += (1 + big.chi(v)) as u64;
        }
        let lead = *coeffs.iter().rev().find(|&&c| c != 0).unwrap();
        let deg = coeffs.iter().rposition(|&c| c != 0).unwrap();
        n + if deg == 5 { 1 } else if big.chi(lead) == 1 { 2 } else { 0 }
    }

    #[test]
    fn small_counts() {
        let c = Genus2Curve::from_ints(5, &[1, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(genus2_count(&c, 1).unwrap(), 6);
        assert_eq!(genus2_count(&c, 2).unwrap(), brute_count(5, &[1, 1, 0, 0, 0, 1], 2));
        let (a1, a2) = weil_coeffs(&c).unwrap();
        assert_eq!(a1, 0);
        let n2 = genus2_count(&c, 2).unwrap() as i64;
        assert_eq!(a2, (a1 * a1 - (26 - n2)) / 2);
    }

    #[test]
    fn counts_match_extension_field() {
        for (q, f) in [(7u64, vec![3i64, 0, 1, 2, 0, 5, 1]), (11, vec![1, 2, 3, 4, 5, 6, 7]), (13, vec![2, 0, 0, 1, 0, 1])] {
            let c = Genus2Curve::from_ints(q, &f).unwrap();
            assert_eq!(genus2_count(&c, 1).unwrap(), brute_count(q, &f, 1));
            assert_eq!(genus2_count(&c, 2).unwrap(), brute_count(q, &f, 2));
        }
    }

    #[test]
    fn nonsquare_lead_has_no_points_at_infinity() {
        // 3 is a nonsquare mod 7
        let c = Genus2Curve::from_ints(7, &[1, 0, 0, 0, 0, 1, 3]).unwrap();
        assert_eq!(c.infinite_points(1), 0);
        assert_eq!(c.infinite_points(2), 2);
    }

    #[test]
    fn moving_a_point_to_infinity_preserves_counts() {
        let c = Genus2Curve::from_ints(31, &[5, 1, 0, 3, 0, 1]).unwrap();
        let g = move_to_infinity(c.fq(), c.f(), 4);
        let d = Genus2Curve::new(c.fq().clone(), g).unwrap();
        assert_eq!(d.degree(), 6);
        assert_eq!(weil_coeffs_exhaustive(&c).unwrap(), weil_coeffs_exhaustive(&d).unwrap());
    }

    #[test]
    fn prime_path_matches_counts() {
        let f = [5i64, 1, 0, 3, 0, 1, 2];
        for q in [503u64, 1009] {
            let c = Genus2Curve::from_ints(q, &f).unwrap();
            let g: Vec<u64> = c.f().iter().map(|&x| x as u64).collect();
            assert_eq!(weil_coeffs_prime(q, &g).unwrap(), weil_coeffs_exhaustive(&c).unwrap());
            let brute: i64 = (0..q as u32).map(|x| c.fq().chi(fp::eval(c.fq(), c.f(), x)) as i64).sum();
            assert_eq!(char_sum_prime(q, &g).0, brute);
        }
    }

    #[test]
    fn bounds_contain_actual_a2() {
        let c = Genus2Curve::from_ints(101, &[1, 7, 0, 3, 9, 1]).unwrap();
        let (a1, a2) = weil_coeffs_exhaustive(&c).unwrap();
        let (lo, hi) = a2_bounds(101, a1);
        assert!(lo <= a2 && a2 <= hi);
    }
}
