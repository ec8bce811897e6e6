//! Isomorphism classes of genus-2 curves over a small prime field.
//!
//! Curves are y² = F(x, z) with F a squarefree binary sextic form. PGL₂ acts
//! on forms up to scalars; for an orbit with stabilizer S, the curve has
//! 2·#{M ∈ S : F∘M = λF with λ a square} automorphisms. If every λ is a
//! square, F and its twist by a nonsquare are two classes with 2·|S|
//! automorphisms each; otherwise they are one class with |S|.

use std::sync::Arc;

use num_rational::Ratio;

use super::Genus2Curve;
use crate::error::{invalid, Result};
use crate::fqpoly as fp;
use crate::gf::Fq;
use crate::numth::is_prime;

/// Largest q accepted by [`enumerate_genus2_weighted`].
pub const CLASS_LIMIT: u64 = 23;

/// One curve per F_q-isomorphism class with weight 1/#Aut, q prime.
pub fn enumerate_genus2_weighted(q: u64) -> Result<Vec<(Genus2Curve, Ratio<u64>)>> {
    if !is_prime(q) || !(5..=CLASS_LIMIT).contains(&q) {
        return invalid(format!("class enumeration needs a prime 5 ≤ q ≤ {CLASS_LIMIT}, got {q}"));
    }
    let fq = Arc::new(Fq::new(q)?);
    let p = q as usize;
    let inv: Vec<u64> = (0..q).map(|x| if x == 0 { 0 } else { fq.inv(x as u32).unwrap() as u64 }).collect();
    let square: Vec<bool> = (0..q).map(|x| fq.chi(x as u32) == 1).collect();

    // (ax + bz)^i (cx + dz)^(6−i) for each matrix in PGL₂, as x-coefficients.
    let mut basis: Vec<[[u64; 7]; 7]> = Vec::with_capacity(p * p * p);
    let mut push = |a: u64, b: u64, c: u64, d: u64| {
        let mut m = [[0u64; 7]; 7];
        for (i, row) in m.iter_mut().enumerate() {
            let mut poly = vec![1u64];
            for _ in 0..i {
                poly = lin_mul(&poly, b, a, q);
            }
            for _ in i..6 {
                poly = lin_mul(&poly, d, c, q);
            }
            row.copy_from_slice(&poly);
        }
        basis.push(m);
    };
    for a in 0..q {
        for d in 0..q {
            for b in 0..q {
                if (a * d + q - b) % q != 0 {
                    push(a, b, 1, d);
                }
            }
        }
    }
    for a in 1..q {
        for b in 0..q {
            push(a, b, 0, 1);
        }
    }

    let p6 = p.pow(6);
    let total = p6 + p.pow(5);
    let mut seen = vec![0u64; total / 64 + 1];
    let mut out = Vec::new();
    let nonsq = fq.generator();
    for idx in 0..total {
        if seen[idx / 64] >> (idx % 64) & 1 == 1 {
            continue;
        }
        let form = decode(idx, p);
        let f: Vec<u32> = form.iter().map(|&c| c as u32).collect();
        if !fp::is_squarefree(&fq, &fp::trim(f.clone())) {
            continue;
        }
        let (mut stab, mut all_square) = (0u64, true);
        for m in &basis {
            let mut img = [0u64; 7];
            for (i, row) in m.iter().enumerate() {
                let c = form[i];
                if c != 0 {
                    for (k, &r) in row.iter().enumerate() {
                        img[k] += c * r;
                    }
                }
            }
            for v in img.iter_mut() {
                *v %= q;
            }
            let (j, lead) = encode(&mut img, p, &inv);
            seen[j / 64] |= 1 << (j % 64);
            if j == idx {
                stab += 1;
                all_square &= square[lead as usize];
            }
        }
        let curve = Genus2Curve::new(fq.clone(), f.clone())?;
        if all_square {
            let w = Ratio::new(1, 2 * stab);
            out.push((curve.twist_by(nonsq)?, w));
            out.push((curve, w));
        } else {
            out.push((curve, Ratio::new(1, stab)));
        }
    }
    Ok(out)
}

/// poly · (s + t·x) over F_q.
fn lin_mul(poly: &[u64], s: u64, t: u64, q: u64) -> Vec<u64> {
    let mut out = vec![0u64; poly.len() + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i] = (out[i] + c * s) % q;
        out[i + 1] = (out[i + 1] + c * t) % q;
    }
    out
}

/// Coefficients of the normalized form with index `idx`.
fn decode(idx: usize, p: usize) -> [u64; 7] {
    let mut c = [0u64; 7];
    let p6 = p.pow(6);
    let (mut rest, top) = if idx < p6 { (idx, 6) } else { (idx - p6, 5) };
    c[top] = 1;
    for v in c.iter_mut().take(top) {
        *v = (rest % p) as u64;
        rest /= p;
    }
    c
}

/// Scales a form so its top coefficient is 1; returns (index, original top coefficient).
fn encode(c: &mut [u64; 7], p: usize, inv: &[u64]) -> (usize, u64) {
    let q = p as u64;
    let top = if c[6] != 0 { 6 } else { 5 };
    let lead = c[top];
    let li = inv[lead as usize];
    let mut idx = 0usize;
    for k in (0..top).rev() {
        idx = idx * p + (c[k] * li % q) as usize;
    }
    (if top == 6 { idx } else { idx + p.pow(6) }, lead)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn mass_is_q_cubed_at_5_and_7() {
        for q in [5u64, 7] {
            let classes = enumerate_genus2_weighted(q).unwrap();
            let s: Ratio<u64> = classes.iter().map(|(_, w)| *w).sum();
            assert_eq!(s, Ratio::from_integer(q * q * q));
            for (_, w) in &classes {
                // reduced automorphism groups sit inside groups of order 48, 10, or 120 when p = 5
                let a = *w.denom();
                assert!(48 % a == 0 || 10 % a == 0 || (q == 5 && 240 % a == 0), "#Aut = {a}");
            }
        }
    }

    #[test]
    fn representatives_are_distinct_models() {
        let classes = enumerate_genus2_weighted(7).unwrap();
        let set: HashSet<Vec<u32>> = classes.iter().map(|(c, _)| c.f().to_vec()).collect();
        assert_eq!(set.len(), classes.len());
    }

    #[test]
    fn split_mass_agrees_with_fast_census() {
        use crate::genus2::{exact_cq, weil_coeffs_exhaustive};
        use crate::weilquartic::classify;
        for q in [7u64, 11] {
            let mut split = Ratio::from_integer(0u64);
            for (c, w) in enumerate_genus2_weighted(q).unwrap() {
                let (a1, a2) = weil_coeffs_exhaustive(&c).unwrap();
                if classify(q, a1, a2).unwrap().tag.is_split() {
                    split += w;
                }
            }
            let fast = exact_cq(q).unwrap().jacobian_split;
            let here = num_rational::BigRational::new((*split.numer()).into(), (*split.denom()).into());
            assert_eq!(here, fast, "q={q}");
        }
    }
}
