//! Weighted counts of split principally polarized surfaces: c_q and d_q.
//!
//! #′A₂(F_q) = q³ + q² splits as Jacobians (q³), products of elliptic curves
//! (q²/2, all split) and restrictions of scalars from F_{q²} (q²/2, split
//! according to x⁴ − bx² + q²). Only the Jacobian part needs curves.
//!
//! Exact mode enumerates y² = f with f monic, translated so the next
//! coefficient vanishes, and with the first nonzero lower coefficient
//! scaled to a coset representative. Each such model carries the number of
//! models it stands for, and Σ multiplicities / (q³ − q) is the weighted
//! count; monic-only is enough because every census class is stable under
//! quadratic twist.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{weil_coeffs, Genus2Curve};
use crate::ellipt::{enumerate_curves, ENUMERATION_LIMIT};
use crate::error::{invalid, Result};
use crate::gf::Fq;
use crate::numth::{gcd_u64, is_prime, ratio_to_f64};
use crate::quadorders::hurwitz_class_number;
use crate::weilquartic::{classify, is_geometrically_split, res_scalars_quartic, classify_quartic, SplitTag, GEOMETRIC_SWEEP};

/// Largest prime accepted by [`exact_cq`].
pub const EXACT_LIMIT: u64 = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct CensusResult {
    pub q: u64,
    /// Σ 1/#Aut over Jacobians (estimated in Monte Carlo mode).
    pub weighted_jacobians_total: BigRational,
    /// All split surfaces: Jacobians, products and restrictions of scalars.
    pub weighted_split: BigRational,
    /// All geometrically split surfaces.
    pub weighted_geom_split: BigRational,
    pub jacobian_split: BigRational,
    pub jacobian_geom_split: BigRational,
    /// Jacobian mass per split class, in [`SplitTag::ALL`] order without `Simple`.
    pub per_tag: Vec<(SplitTag, BigRational)>,
    pub products: BigRational,
    pub res_split: BigRational,
    pub res_total: BigRational,
    pub c_q: f64,
    pub d_q: f64,
    /// Standard errors of c_q and d_q in Monte Carlo mode.
    pub stderr: Option<f64>,
    pub d_stderr: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Largest k tried when deciding geometric splitting.
    pub geometric_sweep: u32,
}

impl CensusResult {
    /// Σ over all principally polarized surfaces.
    pub fn total_mass(&self) -> BigRational {
        &self.weighted_jacobians_total + &self.products + &self.res_total
    }

    /// (row name, weighted mass) pairs for the census table.
    pub fn rows(&self) -> Vec<(String, BigRational)> {
        let mut out: Vec<(String, BigRational)> =
            self.per_tag.iter().map(|(t, m)| (format!("jacobian_{}", t.name()), m.clone())).collect();
        out.push(("jacobian_split".into(), self.jacobian_split.clone()));
        out.push(("jacobian_geom_split".into(), self.jacobian_geom_split.clone()));
        out.push(("jacobian_total".into(), self.weighted_jacobians_total.clone()));
        out.push(("products".into(), self.products.clone()));
        out.push(("res_scalars_split".into(), self.res_split.clone()));
        out.push(("res_scalars_total".into(), self.res_total.clone()));
        out.push(("split".into(), self.weighted_split.clone()));
        out.push(("geom_split".into(), self.weighted_geom_split.clone()));
        out.push(("total".into(), self.total_mass()));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: serde_json::Map<String, serde_json::Value> =
            self.rows().into_iter().map(|(k, v)| (k, json!(v.to_string()))).collect();
        json!({
            "q": self.q,
            "c_q": self.c_q,
            "d_q": self.d_q,
            "stderr": self.stderr,
            "d_stderr": self.d_stderr,
            "samples": self.samples,
            "seed": self.seed,
            "geometric_sweep": self.geometric_sweep,
            "masses": rows,
        })
    }
}

fn big(n: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio_u64(r: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Split class and geometric splitting of each (a1, a2), computed once.
#[derive(Default)]
struct Classifier {
    memo: HashMap<(i64, i64), (SplitTag, bool)>,
}

impl Classifier {
    fn get(&mut self, q: u64, a1: i64, a2: i64) -> Result<(SplitTag, bool)> {
        if let Some(&v) = self.memo.get(&(a1, a2)) {
            return Ok(v);
        }
        let tag = classify(q, a1, a2)?.tag;
        let geom = tag.is_split() || is_geometrically_split(q, a1, a2)?.split;
        self.memo.insert((a1, a2), (tag, geom));
        Ok((tag, geom))
    }
}

/// Multiplicity-weighted counts of monic models per split class.
#[derive(Default, Clone)]
struct Tally {
    by_tag: [u128; 5],
    geom: u128,
    total: u128,
}

fn tag_index(t: SplitTag) -> usize {
    SplitTag::ALL.iter().position(|&x| x == t).unwrap()
}

impl Tally {
    fn add(&mut self, tag: SplitTag, geom: bool, w: u128) {
        self.by_tag[tag_index(tag)] += w;
        if geom {
            self.geom += w;
        }
        self.total += w;
    }

    fn split(&self) -> u128 {
        self.total - self.by_tag[0]
    }
}

/// Exhaustive census of monic models over a prime field.
struct Enumerator {
    p: u64,
    fq: Fq,
    chi: Vec<i8>,
    inv: Vec<u64>,
    /// Monic irreducible X² − tX + n as (t, n).
    quads: Vec<(u64, u64)>,
    /// X^k mod the quadratic as αX + β, k = 0..=6.
    alpha: Vec<[u64; 7]>,
    beta: Vec<[u64; 7]>,
    classifier: Classifier,
    tally: Tally,
    s1: Vec<i64>,
    s2: Vec<i32>,
    /// shifted[D][u] = χ(u² + D) for u ∈ [0, 2p).
    shifted: Vec<Vec<i8>>,
    half: u64,
    zeros: Vec<u64>,
}

enum Shifts {
    All(u128),
    Reps(Vec<u32>, u128),
}

impl Enumerator {
    fn new(p: u64) -> Result<Enumerator> {
        let fq = Fq::new(p)?;
        let chi: Vec<i8> = (0..p).map(|x| fq.chi(x as u32) as i8).collect();
        let mut inv = vec![0u64; p as usize];
        for x in 1..p {
            inv[x as usize] = fq.inv(x as u32).unwrap() as u64;
        }
        let mut quads = Vec::new();
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        for t in 0..p {
            for n in 0..p {
                let disc = (t * t + 4 * (p - n)) % p;
                if chi[disc as usize] != -1 {
                    continue;
                }
                quads.push((t, n));
                let (mut al, mut be) = ([0u64; 7], [0u64; 7]);
                be[0] = 1;
                for k in 0..6 {
                    al[k + 1] = (al[k] * t + be[k]) % p;
                    be[k + 1] = (p - al[k] * n % p) % p;
                }
                alpha.push(al);
                beta.push(be);
            }
        }
        let pu = p as usize;
        let shifted = (0..p)
            .map(|d| (0..2 * p).map(|u| chi[((u % p) * (u % p) + d) as usize % pu]).collect())
            .collect();
        Ok(Enumerator {
            p,
            fq,
            chi,
            inv,
            quads,
            alpha,
            beta,
            classifier: Classifier::default(),
            tally: Tally::default(),
            s1: vec![0; pu],
            s2: vec![0; pu],
            shifted,
            half: (p + 1) / 2,
            zeros: vec![0; pu],
        })
    }

    fn run(&mut self) -> Result<()> {
        let p = self.p;
        let mut c = [0u64; 7];
        c[6] = 1;
        self.rec(6, &[4, 3, 2, 1], 0, &mut c, false, p as u128)?;
        let mut c = [0u64; 7];
        c[5] = 1;
        if p == 5 {
            // translation cannot clear the x⁴ term in characteristic 5
            self.rec(5, &[4, 3, 2, 1], 0, &mut c, false, 1)?;
        } else {
            self.rec(5, &[3, 2, 1], 0, &mut c, false, p as u128)?;
        }
        Ok(())
    }

    fn rec(&mut self, deg: usize, pos: &[usize], i: usize, c: &mut [u64; 7], normalized: bool, mult: u128) -> Result<()> {
        let p = self.p;
        if i == pos.len() {
            let shifts = if normalized {
                Shifts::All(mult)
            } else {
                let g = gcd_u64(deg as u64, p - 1);
                Shifts::Reps(self.fq.coset_reps(g), mult * ((p - 1) / g) as u128)
            };
            return self.batch(deg, c, shifts);
        }
        let k = pos[i];
        if normalized {
            for v in 0..p {
                c[k] = v;
                self.rec(deg, pos, i + 1, c, true, mult)?;
            }
        } else {
            c[k] = 0;
            self.rec(deg, pos, i + 1, c, false, mult)?;
            let g = gcd_u64((deg - k) as u64, p - 1);
            for r in self.fq.coset_reps(g) {
                c[k] = r as u64;
                self.rec(deg, pos, i + 1, c, true, mult * ((p - 1) / g) as u128)?;
            }
        }
        c[k] = 0;
        Ok(())
    }

    /// Counts for every f = g + c0 at once; g has zero constant term.
    fn batch(&mut self, deg: usize, g: &[u64; 7], shifts: Shifts) -> Result<()> {
        let p = self.p;
        let pu = p as usize;
        let mut hist = vec![0u64; pu];
        for x in 0..p {
            let mut v = 0u64;
            for k in (0..=deg).rev() {
                v = (v * x + g[k]) % p;
            }
            hist[v as usize] += 1;
        }
        for c0 in 0..pu {
            let mut s = 0i64;
            for (v, &h) in hist.iter().enumerate() {
                if h != 0 {
                    s += h as i64 * self.chi[(v + c0) % pu] as i64;
                }
            }
            self.s1[c0] = s;
            self.zeros[c0] = hist[(pu - c0) % pu];
            self.s2[c0] = 0;
        }
        for (m, &(t, n)) in self.quads.iter().enumerate() {
            let (al, be) = (&self.alpha[m], &self.beta[m]);
            let (mut a, mut b) = (0u64, 0u64);
            for k in 1..=deg {
                if g[k] != 0 {
                    a += g[k] * al[k];
                    b += g[k] * be[k];
                }
            }
            let (a, b) = (a % p, b % p);
            // norm of αω + β + c0 is (c0 + h)² + D with h = B/2, D = A − h²
            let big_a = (b * b + a * b % p * t + a * a % p * n) % p;
            let h = (2 * b + a * t) % p * self.half % p;
            let d = (big_a + p - h * h % p) % p;
            let row = &self.shifted[d as usize][h as usize..h as usize + pu];
            for (s, &c) in self.s2.iter_mut().zip(row) {
                *s += c as i32;
            }
        }
        let nq = self.quads.len() as i64;
        let (pi, inf) = (p as i64, if deg == 6 { 2i64 } else { 1 });
        let deriv: Vec<u64> = (1..=deg).map(|k| g[k] * k as u64 % p).collect();
        let sel: Vec<(u64, u128)> = match shifts {
            Shifts::All(m) => (0..p).map(|c0| (c0, m)).collect(),
            Shifts::Reps(reps, m) => reps.into_iter().map(|r| (r as u64, m)).collect(),
        };
        for (c0, w) in sel {
            let mut f = *g;
            f[0] = c0;
            if !coprime(&f[..=deg], &deriv, p, &self.inv) {
                continue;
            }
            let c = c0 as usize;
            let n1 = pi + self.s1[c] + inf;
            let n2 = 2 * pi - self.zeros[c] as i64 + 2 * nq + 2 * self.s2[c] as i64 + inf;
            let a1 = pi + 1 - n1;
            let a2 = (a1 * a1 - (pi * pi + 1 - n2)) / 2;
            let (tag, geom) = self.classifier.get(p, a1, a2)?;
            self.tally.add(tag, geom, w);
        }
        Ok(())
    }
}

/// Whether a and b share no root; dense polynomials of degree ≤ 7 over F_p.
fn coprime(a: &[u64], b: &[u64], p: u64, inv: &[u64]) -> bool {
    fn deg(v: &[u64; 8]) -> i64 {
        v.iter().rposition(|&c| c != 0).map_or(-1, |i| i as i64)
    }
    let (mut x, mut y) = ([0u64; 8], [0u64; 8]);
    x[..a.len()].copy_from_slice(a);
    y[..b.len()].copy_from_slice(b);
    let (mut dx, mut dy) = (deg(&x), deg(&y));
    loop {
        if dy < 0 {
            return dx == 0;
        }
        if dy == 0 {
            return true;
        }
        let db = dy as usize;
        let lb = inv[y[db] as usize];
        while dx >= dy {
            let d = dx as usize;
            let c = x[d] * lb % p;
            for i in 0..=db {
                let idx = d - db + i;
                x[idx] = (x[idx] + p - c * y[i] % p) % p;
            }
            dx = deg(&x);
        }
        std::mem::swap(&mut x, &mut y);
        std::mem::swap(&mut dx, &mut dy);
    }
}

/// Products of two polarized elliptic curves: (Σ 1/#Aut)²/2.
pub fn products_mass(q: u64) -> Result<BigRational> {
    let total = if q <= ENUMERATION_LIMIT {
        enumerate_curves(q)?
            .into_iter()
            .fold(BigRational::zero(), |acc, (_, w)| acc + ratio_u64(w))
    } else {
        big(q as u128)
    };
    Ok(&total * &total / big(2))
}

/// (split, total) mass of restrictions of scalars of curves over F_{q²}.
///
/// Enumerates F_{q²} when it is small; otherwise, for prime q, weighs each
/// split trace b = s² − 2q by the Hurwitz class number, with the
/// supersingular b = −2q carrying the Eichler mass (q − 1)/24.
pub fn res_scalars_masses(q: u64) -> Result<(BigRational, BigRational)> {
    let qq = q * q;
    if qq <= ENUMERATION_LIMIT {
        let fq2 = Arc::new(Fq::new(qq)?);
        let mut memo: HashMap<i64, bool> = HashMap::new();
        let (mut split, mut total) = (BigRational::zero(), BigRational::zero());
        for (e, w) in crate::ellipt::enumerate_curves_in(&fq2)? {
            let b = e.trace();
            let s = match memo.get(&b) {
                Some(&s) => s,
                None => {
                    let s = classify_quartic(&res_scalars_quartic(q, b)?).tag.is_split();
                    memo.insert(b, s);
                    s
                }
            };
            let w = ratio_u64(w);
            if s {
                split += &w;
            }
            total += w;
        }
        let two = big(2);
        return Ok((split / &two, total / two));
    }
    if !is_prime(q) {
        return invalid(format!("restriction-of-scalars mass for composite q = {q} needs q² ≤ {ENUMERATION_LIMIT}"));
    }
    let mut split = BigRational::new(BigInt::from(q - 1), BigInt::from(24));
    let mut s = 1u64;
    while s * s <= 4 * q {
        let b = s as i64 * s as i64 - 2 * q as i64;
        if s % q != 0 && b.unsigned_abs() < 2 * q {
            let h = hurwitz_class_number(b * b - 4 * (qq as i64))?;
            split += ratio_u64(h) / big(2);
        }
        s += 1;
    }
    let two = big(2);
    Ok((split / &two, big(qq as u128) / two))
}

fn assemble(
    q: u64,
    jac_total: BigRational,
    per_tag: Vec<(SplitTag, BigRational)>,
    jac_geom: BigRational,
) -> Result<CensusResult> {
    let products = products_mass(q)?;
    let (res_split, res_total) = res_scalars_masses(q)?;
    let jacobian_split = per_tag.iter().fold(BigRational::zero(), |acc, (_, m)| acc + m);
    let weighted_split = &jacobian_split + &products + &res_split;
    // every restriction of scalars splits over F_{q²}
    let weighted_geom_split = &jac_geom + &products + &res_total;
    let denom = (q as f64).powi(3) + (q as f64).powi(2);
    let sq = (q as f64).sqrt();
    Ok(CensusResult {
        q,
        c_q: sq * ratio_to_f64(&weighted_split) / denom,
        d_q: sq * ratio_to_f64(&weighted_geom_split) / denom,
        weighted_jacobians_total: jac_total,
        weighted_split,
        weighted_geom_split,
        jacobian_split,
        jacobian_geom_split: jac_geom,
        per_tag,
        products,
        res_split,
        res_total,
        stderr: None,
        d_stderr: None,
        samples: None,
        seed: None,
        geometric_sweep: GEOMETRIC_SWEEP,
    })
}

/// Exact c_q and d_q by enumerating every genus-2 curve over F_q, q prime.
pub fn exact_cq(q: u64) -> Result<CensusResult> {
    if !is_prime(q) || q < 5 || q > EXACT_LIMIT {
        return invalid(format!("exact census needs a prime 5 ≤ q ≤ {EXACT_LIMIT}, got {q}"));
    }
    let mut en = Enumerator::new(q)?;
    en.run()?;
    let t = &en.tally;
    let norm = big(q as u128 * q as u128 * q as u128 - q as u128);
    let jac_total = big(t.total) / &norm;
    let qc = big((q as u128).pow(3));
    if jac_total != qc {
        return invalid(format!("Jacobian mass {jac_total} differs from q³ = {qc}"));
    }
    let per_tag = SplitTag::ALL[1..]
        .iter()
        .map(|&tag| (tag, big(t.by_tag[tag_index(tag)]) / &norm))
        .collect();
    let jac_geom = big(t.geom) / &norm;
    debug_assert!(t.split() <= t.geom);
    assemble(q, jac_total, per_tag, jac_geom)
}

/// Per-class weighted masses of the exact census, as table rows.
pub fn split_census(q: u64) -> Result<Vec<(String, BigRational)>> {
    Ok(exact_cq(q)?.rows())
}

/// A uniformly random squarefree binary sextic form, as y² = f(x) with deg f ∈ {5, 6}.
pub fn random_curve<R: Rng>(fq: &Arc<Fq>, rng: &mut R) -> Genus2Curve {
    loop {
        let f: Vec<u32> = (0..7).map(|_| rng.gen_range(0..fq.q) as u32).collect();
        if f[6] == 0 && f[5] == 0 {
            continue;
        }
        if let Ok(c) = Genus2Curve::new(fq.clone(), f) {
            return c;
        }
    }
}

/// c_q and d_q estimated from `samples` random curves.
///
/// Sampling binary sextic forms uniformly hits each isomorphism class with
/// probability proportional to 1/#Aut, so the split fraction times q³ estimates
/// the split Jacobian mass; the non-Jacobian masses are added exactly.
pub fn monte_carlo_cq(q: u64, samples: u64, seed: u64) -> Result<CensusResult> {
    if samples < 1000 {
        return invalid("at least 1000 samples are required");
    }
    let fq = Arc::new(Fq::new(q)?);
    if fq.p < 5 {
        return invalid("characteristic must be at least 5");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classifier = Classifier::default();
    let mut tally = Tally::default();
    for _ in 0..samples {
        let c = random_curve(&fq, &mut rng);
        let (a1, a2) = weil_coeffs(&c)?;
        let (tag, geom) = classifier.get(q, a1, a2)?;
        tally.add(tag, geom, 1);
    }
    let q3 = big((q as u128).pow(3));
    let n = big(samples as u128);
    let scale = |k: u128| big(k) * &q3 / &n;
    let per_tag = SplitTag::ALL[1..].iter().map(|&t| (t, scale(tally.by_tag[tag_index(t)]))).collect();
    let geom = scale(tally.geom);
    let mut r = assemble(q, q3.clone(), per_tag, geom)?;
    let denom = (q as f64).powi(3) + (q as f64).powi(2);
    let se = |k: u128| {
        let f = k as f64 / samples as f64;
        (q as f64).sqrt() * (q as f64).powi(3) * (f * (1.0 - f) / samples as f64).sqrt() / denom
    };
    r.stderr = Some(se(tally.split()));
    r.d_stderr = Some(se(tally.geom));
    r.samples = Some(samples);
    r.seed = Some(seed);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coprime_small() {
        let inv: Vec<u64> = (0..7u64).map(|x| (1..7).find(|y| x * y % 7 == 1).unwrap_or(0)).collect();
        // (x − 1)(x − 2) and its derivative 2x − 3
        assert!(coprime(&[2, 4, 1], &[4, 2], 7, &inv));
        // (x − 1)² and 2x − 2
        assert!(!coprime(&[1, 5, 1], &[5, 2], 7, &inv));
    }

    #[test]
    fn masses_at_q7() {
        let r = exact_cq(7).unwrap();
        assert_eq!(r.weighted_jacobians_total, big(343));
        assert_eq!(r.total_mass(), big(343 + 49));
        assert_eq!(r.products, BigRational::new(49.into(), 2.into()));
        assert_eq!(r.res_total, BigRational::new(49.into(), 2.into()));
        assert!(r.weighted_split <= r.weighted_geom_split);
    }

    #[test]
    fn res_scalars_closed_form_matches_enumeration() {
        for q in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let (enumerated, _) = res_scalars_masses(q).unwrap();
            let qq = (q * q) as i64;
            let mut split = BigRational::new(BigInt::from(q - 1), BigInt::from(24));
            for s in 1..=(((4 * q) as f64).sqrt() as i64) {
                let b = s * s - 2 * q as i64;
                split += ratio_u64(hurwitz_class_number(b * b - 4 * qq).unwrap()) / big(2);
            }
            assert_eq!(enumerated, split / big(2), "q={q}");
        }
    }
}
