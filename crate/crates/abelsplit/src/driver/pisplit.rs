//! π_split(z): good primes p ≤ z where the reduced Jacobian is split.

use super::curve::RationalGenus2;
use crate::error::{Error, Result};
use crate::genus2::{genus2_count, weil_coeffs_prime, Genus2Curve, COUNT_LIMIT};
use crate::numth::isqrt;
use crate::weilquartic::classify;

/// Default number of grid points for the counting function.
pub const GRID: usize = 40;
/// Primes up to this bound are cross-checked against exhaustive counts by default.
pub const ORACLE_LIMIT: u64 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct PisplitResult {
    pub zmax: u64,
    /// (z, π_split(z)) on the grid.
    pub samples: Vec<(u64, u64)>,
    pub split: Vec<u64>,
    pub good: u64,
    /// Primes whose a2 could not be isolated; excluded from the counts.
    pub undetermined: Vec<u64>,
    pub oracle_checked: u64,
    pub oracle_mismatches: Vec<u64>,
}

/// `n` log-spaced integers from min(100, zmax) to zmax, deduplicated.
pub fn log_grid(zmax: u64, n: usize) -> Vec<u64> {
    if zmax == 0 || n == 0 {
        return Vec::new();
    }
    let lo = zmax.min(100) as f64;
    let (a, b) = (lo.ln(), (zmax as f64).ln());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            if n == 1 || i == n - 1 {
                zmax
            } else {
                ((a + (b - a) * i as f64 / (n - 1) as f64).exp().round() as u64).clamp(1, zmax)
            }
        })
        .collect();
    out.dedup();
    out
}

/// Split/simple from exhaustive counts over F_p and F_{p²}: split iff the Weil
/// quartic is (x² − sx + p)(x² − tx + p) with |s|, |t| ≤ 2√p.
pub fn oracle_split(curve: &RationalGenus2, p: u64) -> Result<bool> {
    let c = Genus2Curve::from_ints(p, curve.coeffs())?;
    let (n1, n2) = (genus2_count(&c, 1)? as i64, genus2_count(&c, 2)? as i64);
    let q = p as i64;
    let s1 = q + 1 - n1;
    let s2 = q * q + 1 - n2;
    let a2 = (s1 * s1 - s2) / 2;
    let r = isqrt(4 * p) as i64;
    Ok((-r..=r).any(|s| {
        let t = s1 - s;
        t.abs() <= r && s * t + 2 * q == a2
    }))
}

/// Whether the reduction at a good prime p is split; None if undetermined.
pub fn split_at(curve: &RationalGenus2, p: u64) -> Result<Option<bool>> {
    match weil_coeffs_prime(p, &curve.reduce(p)) {
        Ok((a1, a2)) => Ok(Some(classify(p, a1, a2)?.tag.is_split())),
        Err(Error::Undetermined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Counts split good primes up to `zmax`, sampling the counting function on a
/// log-spaced grid. Decisions for p ≤ `oracle_upto` are also made by
/// [`oracle_split`] and disagreements recorded.
pub fn pisplit(curve: &RationalGenus2, zmax: u64, grid: usize, oracle_upto: u64) -> Result<PisplitResult> {
    if zmax > COUNT_LIMIT {
        return Err(Error::Overflow(format!("zmax = {zmax} exceeds {COUNT_LIMIT}")));
    }
    let mut res = PisplitResult {
        zmax,
        samples: Vec::new(),
        split: Vec::new(),
        good: 0,
        undetermined: Vec::new(),
        oracle_checked: 0,
        oracle_mismatches: Vec::new(),
    };
    for p in curve.good_primes(zmax) {
        res.good += 1;
        let Some(split) = split_at(curve, p)? else {
            res.undetermined.push(p);
            continue;
        };
        if p <= oracle_upto {
            res.oracle_checked += 1;
            if oracle_split(curve, p)? != split {
                res.oracle_mismatches.push(p);
            }
        }
        if split {
            res.split.push(p);
        }
    }
    res.samples = log_grid(zmax, grid).into_iter().map(|z| (z, count_upto(&res.split, z))).collect();
    Ok(res)
}

/// #{p ∈ sorted : p ≤ z}.
pub fn count_upto(sorted: &[u64], z: u64) -> u64 {
    sorted.partition_point(|&p| p <= z) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = log_grid(1_000_000, 40);
        assert_eq!(g.len(), 40);
        assert_eq!((g[0], g[39]), (100, 1_000_000));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_grid(2, 40), vec![2]);
        assert!(log_grid(150, 40).windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn small_z() {
        let c: RationalGenus2 = "x^5+x+6".parse().unwrap();
        let r = pisplit(&c, 2, GRID, ORACLE_LIMIT).unwrap();
        assert_eq!(r.samples, vec![(2, 0)]);
        assert_eq!(r.good, 0);
    }

    #[test]
    fn agrees_with_oracle_to_fifty() {
        let c: RationalGenus2 = "x^5+x+6".parse().unwrap();
        let r = pisplit(&c, 50, GRID, 50).unwrap();
        let want: Vec<u64> = c.good_primes(50).into_iter().filter(|&p| oracle_split(&c, p).unwrap()).collect();
        assert_eq!(r.split, want);
        assert_eq!(r.oracle_checked, c.good_primes(50).len() as u64);
        assert!(r.oracle_mismatches.is_empty() && r.undetermined.is_empty());
    }
}
