//! Division polynomials and the test "Frobenius acts as an integer on E[d]".
//!
//! With F = x³ + a4·x + a6 we write ψ_n = g_n(x) for odd n and ψ_n = y·g_n(x)
//! for even n, so every g_n is a polynomial in x alone.

use crate::error::{invalid, Error, Result};
use crate::fqpoly::{self as fp, P};
use crate::gf::Fq;
use crate::numth::{factor, gcd_u64, isqrt};

use super::matrix::Mat2;
use super::{frobenius_discriminant, EllipticCurve};

/// Largest modulus d for which the scalar test builds ψ_d.
pub const SCALAR_TEST_LIMIT: u64 = 64;

/// Exact g_0, …, g_upto.
pub fn division_polys(f: &Fq, a4: u32, a6: u32, upto: usize) -> Vec<P> {
    let c = |v: i64| f.from_int(v);
    let big_f: P = fp::trim(vec![a6, a4, 0, 1]);
    let f2 = fp::mul(f, &big_f, &big_f);
    let (a2, b2, ab) = (f.mul(a4, a4), f.mul(a6, a6), f.mul(a4, a6));
    let mut g: Vec<P> = vec![
        Vec::new(),
        vec![1],
        fp::constant(c(2)),
        fp::trim(vec![f.neg(a2), f.mul(c(12), a6), f.mul(c(6), a4), 0, c(3)]),
    ];
    let g4 = fp::trim(vec![
        f.neg(f.add(f.mul(c(8), b2), f.mul(a2, a4))),
        f.neg(f.mul(c(4), ab)),
        f.neg(f.mul(c(5), a2)),
        f.mul(c(20), a6),
        f.mul(c(5), a4),
        0,
        1,
    ]);
    g.push(fp::scale(f, &g4, c(4)));
    let inv2 = f.inv(c(2)).unwrap();
    let cube = |x: &P| fp::mul(f, &fp::mul(f, x, x), x);
    let sq = |x: &P| fp::mul(f, x, x);
    for n in 5..=upto {
        let m = n / 2;
        let next = if n % 2 == 1 {
            let t1 = fp::mul(f, &g[m + 2], &cube(&g[m]));
            let t2 = fp::mul(f, &g[m - 1], &cube(&g[m + 1]));
            if m % 2 == 0 {
                fp::sub(f, &fp::mul(f, &f2, &t1), &t2)
            } else {
                fp::sub(f, &t1, &fp::mul(f, &f2, &t2))
            }
        } else {
            let inner = fp::sub(
                f,
                &fp::mul(f, &g[m + 2], &sq(&g[m - 1])),
                &fp::mul(f, &g[m - 2], &sq(&g[m + 1])),
            );
            fp::scale(f, &fp::mul(f, &g[m], &inner), inv2)
        };
        g.push(next);
    }
    g.truncate(upto + 1);
    g
}

/// If Frobenius acts on E[d] as an integer, returns that integer mod d.
pub fn frobenius_scalar(e: &EllipticCurve, d: u64) -> Result<Option<u64>> {
    if d == 0 {
        return invalid("modulus must be positive");
    }
    if d == 1 {
        return Ok(Some(0));
    }
    if gcd_u64(d, e.p()) != 1 {
        return invalid(format!("{d} is not coprime to the characteristic"));
    }
    if d > SCALAR_TEST_LIMIT {
        return Err(Error::Undetermined(format!("scalar test mod {d} exceeds the limit {SCALAR_TEST_LIMIT}")));
    }
    let (a, q) = (e.trace(), e.q());
    let di = d as i64;
    let cands: Vec<u64> = (1..d)
        .filter(|&c| {
            gcd_u64(c, d) == 1
                && (2 * c as i64 - a).rem_euclid(di) == 0
                && ((c as u128 * c as u128) % d as u128) as u64 == q % d
        })
        .collect();
    if cands.is_empty() {
        return Ok(None);
    }
    let f = e.fq().as_ref();
    let g = division_polys(f, e.a4_index(), e.a6_index(), d as usize + 1);
    let big_f: P = fp::trim(vec![e.a6_index(), e.a4_index(), 0, 1]);
    let modulus = if d % 2 == 0 {
        fp::mul(f, &g[d as usize], &big_f)
    } else {
        g[d as usize].clone()
    };
    let modulus = fp::monic(f, &modulus);
    let x: P = vec![0, 1];
    let xq_minus_x = fp::sub(f, &fp::powmod(f, &x, q, &modulus), &x);
    let x_test = |c: usize| {
        let (num, den) = if c % 2 == 1 {
            (fp::mul(f, &big_f, &fp::mul(f, &g[c - 1], &g[c + 1])), fp::mul(f, &g[c], &g[c]))
        } else {
            (fp::mul(f, &g[c - 1], &g[c + 1]), fp::mul(f, &big_f, &fp::mul(f, &g[c], &g[c])))
        };
        let lhs = fp::add(f, &fp::mulmod(f, &xq_minus_x, &den, &modulus), &num);
        fp::rem(f, &lhs, &modulus).is_empty()
    };
    if d == 4 {
        // 1 and 3 move x-coordinates alike; the sign of y^q/y decides.
        if !x_test(1) {
            return Ok(None);
        }
        let g4 = fp::monic(f, &g[4]);
        let h = fp::powmod(f, &big_f, (q - 1) / 2, &g4);
        let c = if h == vec![1] {
            1
        } else if h == fp::constant(f.neg(1)) {
            3
        } else {
            return Ok(None);
        };
        return Ok(cands.contains(&c).then_some(c));
    }
    Ok(cands.into_iter().find(|&c| x_test(c as usize)))
}

/// The largest j ≤ max_j with Frobenius scalar on E[ℓ^j], and the scalar mod ℓ^j.
pub fn scalar_level(e: &EllipticCurve, l: u64, max_j: u32) -> Result<(u32, u64)> {
    let mut best = (0, 0);
    for j in 1..=max_j {
        match frobenius_scalar(e, l.pow(j))? {
            Some(c) => best = (j, c),
            None => break,
        }
    }
    Ok(best)
}

/// relcond(E) = cond(ℤ[π]) / cond(End E); 0 when End E is quaternionic.
pub fn relative_conductor(e: &EllipticCurve) -> Result<u64> {
    let (q, a, p) = (e.q() as i64, e.trace(), e.p() as i64);
    if a * a == 4 * q {
        return Ok(0);
    }
    if e.is_ordinary() {
        let disc = frobenius_discriminant(e.q(), a)?;
        let mut r = 1;
        for (l, k) in factor(disc.conductor) {
            let (j, _) = scalar_level(e, l, k)?;
            r *= l.pow(j);
        }
        return Ok(r);
    }
    let fq = e.fq();
    if fq.k % 2 == 1 && a == 0 {
        let base = isqrt(e.q() / e.p());
        if p % 4 == 3 {
            let cubic: P = fp::trim(vec![e.a6_index(), e.a4_index(), 0, 1]);
            if fp::count_roots(fq, &cubic) == 3 {
                return Ok(2 * base);
            }
        }
        return Ok(base);
    }
    if fq.k % 2 == 0 && (a == 0 || a * a == q) {
        return Ok(isqrt(e.q()));
    }
    invalid(format!("unexpected supersingular trace {a} over F_{q}"))
}

/// A matrix conjugate in GL₂(ℤ/n) to Frobenius on E[n], from scalar tests alone.
///
/// On each ℓ^k ∥ n, if γ ≡ c mod ℓ^j is scalar with j maximal, then
/// γ ~ c + ℓ^j·δ with δ cyclic, hence conjugate to the companion matrix of its
/// characteristic polynomial (tr δ = (a − 2c)/ℓ^j, det δ = (c² − ac + q)/ℓ^{2j}).
pub fn frobenius_class_rep(e: &EllipticCurve, n: u64) -> Result<Mat2> {
    if gcd_u64(n, e.p()) != 1 {
        return invalid(format!("{n} is not coprime to q"));
    }
    let (a, q) = (e.trace() as i128, e.q() as i128);
    let mut parts = Vec::new();
    for (l, k) in factor(n) {
        let m = l.pow(k);
        let (j, c) = scalar_level(e, l, k)?;
        if j == k {
            parts.push(Mat2::scalar(m, c as i64));
            continue;
        }
        let lj = l.pow(j) as i128;
        let c = c as i128;
        let t = (a - 2 * c) / lj;
        let dd = (c * c - a * c + q) / (lj * lj);
        debug_assert_eq!((a - 2 * c) % lj, 0);
        debug_assert_eq!((c * c - a * c + q) % (lj * lj), 0);
        let comp = Mat2::companion(m, (t % m as i128) as i64, (dd % m as i128) as i64);
        let lj = lj as u64;
        let rep = Mat2 {
            n: m,
            a: (c as u64 + lj * comp.a) % m,
            b: lj * comp.b % m,
            c: lj * comp.c % m,
            d: (c as u64 + lj * comp.d) % m,
        };
        parts.push(rep);
    }
    Ok(Mat2::crt(&parts))
}
