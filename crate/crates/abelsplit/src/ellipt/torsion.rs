//! n-torsion over extensions: bases, Frobenius matrices, Weil pairings,
//! symplectic types and anti-isometry counts.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gf::{embed, make_field, poly_roots, sqrt_fq, Field, FieldElement};
use crate::numth::{euler_phi, factor, gcd_u64, kronecker_symbol, lcm_u64};

use super::divpoly::{frobenius_class_rep, frobenius_scalar};
use super::matrix::{centralizer_size, gl2, Mat2};
use super::EllipticCurve;

/// Largest n accepted by [`torsion_basis`].
pub const MAX_TORSION: u64 = 12;
/// Largest extension degree k over F_q used for torsion points.
pub const MAX_EXTENSION: u64 = 48;

pub type FrobMatrix = Mat2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EPoint {
    Inf,
    Aff(FieldElement, FieldElement),
}

/// A curve over F_q with its coefficients mapped into an extension field.
#[derive(Clone, Debug)]
pub struct ExtCurve {
    pub field: Field,
    pub a4: FieldElement,
    pub a6: FieldElement,
    /// q, for the Frobenius.
    pub q: u64,
}

impl ExtCurve {
    /// E over F_{q^k}.
    pub fn over_extension(e: &EllipticCurve, k: u64) -> Result<ExtCurve> {
        let fq = e.fq();
        let base = fq.field();
        let field = make_field(fq.p, base.degree() * k as usize)?;
        let (a4, a6) = if k == 1 {
            let conv = |x: &FieldElement| field.from_coeffs(x.coeffs()).unwrap();
            (conv(&e.a4()), conv(&e.a6()))
        } else {
            let emb = embed(base, &field)?;
            (emb.apply(&field, e.a4().coeffs()), emb.apply(&field, e.a6().coeffs()))
        };
        Ok(ExtCurve { field, a4, a6, q: e.q() })
    }

    pub fn contains(&self, p: &EPoint) -> bool {
        match p {
            EPoint::Inf => true,
            EPoint::Aff(x, y) => self.field.sqr(y) == self.rhs(x),
        }
    }

    fn rhs(&self, x: &FieldElement) -> FieldElement {
        let k = &self.field;
        let x2 = k.sqr(x);
        k.add(&k.mul(&k.add(&x2, &self.a4), x), &self.a6)
    }

    pub fn neg(&self, p: &EPoint) -> EPoint {
        match p {
            EPoint::Inf => EPoint::Inf,
            EPoint::Aff(x, y) => EPoint::Aff(x.clone(), self.field.neg(y)),
        }
    }

    /// Slope of the line through p and q, or None if it is vertical.
    fn slope(&self, p: &(FieldElement, FieldElement), q: &(FieldElement, FieldElement)) -> Option<FieldElement> {
        let k = &self.field;
        if p.0 == q.0 {
            if p.1 != q.1 || p.1.is_zero() {
                return None;
            }
            let num = k.add(&k.scale(&k.sqr(&p.0), 3), &self.a4);
            k.div(&num, &k.add(&p.1, &p.1))
        } else {
            k.div(&k.sub(&q.1, &p.1), &k.sub(&q.0, &p.0))
        }
    }

    fn add_with_slope(&self, p: &(FieldElement, FieldElement), q: &(FieldElement, FieldElement), l: &FieldElement) -> EPoint {
        let k = &self.field;
        let x3 = k.sub(&k.sub(&k.sqr(l), &p.0), &q.0);
        let y3 = k.sub(&k.mul(l, &k.sub(&p.0, &x3)), &p.1);
        EPoint::Aff(x3, y3)
    }

    pub fn add(&self, p: &EPoint, q: &EPoint) -> EPoint {
        match (p, q) {
            (EPoint::Inf, _) => q.clone(),
            (_, EPoint::Inf) => p.clone(),
            (EPoint::Aff(x1, y1), EPoint::Aff(x2, y2)) => {
                let (a, b) = ((x1.clone(), y1.clone()), (x2.clone(), y2.clone()));
                match self.slope(&a, &b) {
                    None => EPoint::Inf,
                    Some(l) => self.add_with_slope(&a, &b, &l),
                }
            }
        }
    }

    pub fn sub(&self, p: &EPoint, q: &EPoint) -> EPoint {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, p: &EPoint, n: &BigUint) -> EPoint {
        let mut r = EPoint::Inf;
        for i in (0..n.bits()).rev() {
            r = self.add(&r, &r);
            if n.bit(i) {
                r = self.add(&r, p);
            }
        }
        r
    }

    pub fn mul_u64(&self, p: &EPoint, n: u64) -> EPoint {
        self.mul(p, &BigUint::from(n))
    }

    /// The q-power Frobenius.
    pub fn frobenius(&self, p: &EPoint) -> EPoint {
        match p {
            EPoint::Inf => EPoint::Inf,
            EPoint::Aff(x, y) => EPoint::Aff(self.field.pow_u64(x, self.q), self.field.pow_u64(y, self.q)),
        }
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> EPoint {
        loop {
            let x = self.field.random(rng);
            let v = self.rhs(&x);
            if let Ok(Some(y)) = sqrt_fq(&v, &self.field) {
                let y = if rng.gen::<bool>() { self.field.neg(&y) } else { y };
                return EPoint::Aff(x, y);
            }
        }
    }

    /// #E(K) from the trace over F_q.
    pub fn order(&self, trace: i64) -> BigUint {
        let k = (self.field.degree() as u64) / self.base_degree();
        let (s, _) = power_sum(trace, self.q, k);
        let qk = num_bigint::BigInt::from(self.q).pow(k as u32);
        let n: num_bigint::BigInt = qk + 1u32 - s;
        n.to_biguint().expect("positive group order")
    }

    fn base_degree(&self) -> u64 {
        let (_, e) = crate::numth::prime_power(self.q).unwrap();
        e as u64
    }

    /// f_{n,P}(Q) by Miller's loop with normalized lines; None on a degenerate evaluation.
    fn miller(&self, p: &EPoint, q: &EPoint, n: u64) -> Option<FieldElement> {
        let k = &self.field;
        let (pp, (xq, yq)) = match (p, q) {
            (EPoint::Aff(x, y), EPoint::Aff(a, b)) => ((x.clone(), y.clone()), (a.clone(), b.clone())),
            _ => return None,
        };
        let mut f = k.one();
        let mut t = EPoint::Aff(pp.0.clone(), pp.1.clone());
        // Evaluate l_{T,S}(Q)/v_{T+S}(Q) and return T + S.
        let step = |t: &EPoint, s: &(FieldElement, FieldElement)| -> Option<(FieldElement, EPoint)> {
            let tt = match t {
                EPoint::Aff(x, y) => (x.clone(), y.clone()),
                EPoint::Inf => return None,
            };
            match self.slope(&tt, s) {
                None => Some((k.sub(&xq, &tt.0), EPoint::Inf)),
                Some(l) => {
                    let r = self.add_with_slope(&tt, s, &l);
                    let line = k.sub(&k.sub(&yq, &tt.1), &k.mul(&l, &k.sub(&xq, &tt.0)));
                    let xr = match &r {
                        EPoint::Aff(x, _) => x.clone(),
                        EPoint::Inf => unreachable!(),
                    };
                    Some((k.div(&line, &k.sub(&xq, &xr))?, r))
                }
            }
        };
        let bits = 64 - n.leading_zeros();
        for i in (0..bits - 1).rev() {
            let tt = match &t {
                EPoint::Aff(x, y) => (x.clone(), y.clone()),
                EPoint::Inf => return None,
            };
            let (v, r) = step(&t, &tt)?;
            f = k.mul(&k.sqr(&f), &v);
            t = r;
            if (n >> i) & 1 == 1 {
                let (v, r) = step(&t, &pp)?;
                f = k.mul(&f, &v);
                t = r;
            }
        }
        if f.is_zero() || t != EPoint::Inf {
            return None;
        }
        Some(f)
    }

    /// The Weil pairing e_n(P, Q) = (−1)^n f_P(Q)/f_Q(P) for independent P, Q.
    pub fn weil_pairing(&self, p: &EPoint, q: &EPoint, n: u64) -> Option<FieldElement> {
        let k = &self.field;
        let num = self.miller(p, q, n)?;
        let den = self.miller(q, p, n)?;
        let r = k.div(&num, &den)?;
        Some(if n % 2 == 1 { k.neg(&r) } else { r })
    }
}

/// s_k = α^k + β^k for the roots of T² − aT + q, and s_{k−1}.
pub fn power_sum(a: i64, q: u64, k: u64) -> (num_bigint::BigInt, num_bigint::BigInt) {
    use num_bigint::BigInt;
    let (a, q) = (BigInt::from(a), BigInt::from(q));
    let (mut prev, mut cur) = (BigInt::from(2), a.clone());
    if k == 0 {
        return (prev, BigInt::zero());
    }
    for _ in 1..k {
        let next = &a * &cur - &q * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    (cur, prev)
}

/// Generators (P, Q) of E[n] over the field F_{q^k}, with the data derived from them.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub n: u64,
    /// Extension degree over F_q.
    pub k: u64,
    pub curve: ExtCurve,
    pub p: EPoint,
    pub q: EPoint,
}

impl TorsionBasis {
    /// All αP + βQ keyed by point.
    pub fn coordinates(&self) -> HashMap<EPoint, (u64, u64)> {
        let c = &self.curve;
        let mut out = HashMap::with_capacity((self.n * self.n) as usize);
        let mut row = EPoint::Inf;
        for a in 0..self.n {
            let mut pt = row.clone();
            for b in 0..self.n {
                out.insert(pt.clone(), (a, b));
                pt = c.add(&pt, &self.q);
            }
            row = c.add(&row, &self.p);
        }
        out
    }

    /// e_n(P, Q) as ζ_n^x, with ζ_n the lex-smallest element of exact order n.
    pub fn pairing_log(&self) -> Result<u64> {
        if self.n == 1 {
            return Ok(0);
        }
        let e = self
            .curve
            .weil_pairing(&self.p, &self.q, self.n)
            .ok_or_else(|| Error::Undetermined("degenerate Miller evaluation".into()))?;
        let z = root_of_unity(&self.curve.field, self.n)?;
        discrete_log_mu(&self.curve.field, &z, &e, self.n)
            .ok_or_else(|| Error::Undetermined("pairing value is not an n-th root of unity".into()))
    }
}

/// The lexicographically smallest element of exact order n in the field.
pub fn root_of_unity(k: &Field, n: u64) -> Result<FieldElement> {
    let mut poly = vec![k.zero(); n as usize + 1];
    poly[0] = k.neg(&k.one());
    poly[n as usize] = k.one();
    let roots = poly_roots(&poly, k)?;
    let primes: Vec<u64> = factor(n).into_iter().map(|(l, _)| l).collect();
    roots
        .into_iter()
        .find(|z| primes.iter().all(|&l| k.pow_u64(z, n / l) != k.one()))
        .ok_or_else(|| Error::Invalid(format!("no element of order {n} in the field")))
}

fn discrete_log_mu(k: &Field, z: &FieldElement, v: &FieldElement, n: u64) -> Option<u64> {
    let mut cur = k.one();
    for i in 0..n {
        if &cur == v {
            return Some(i);
        }
        cur = k.mul(&cur, z);
    }
    None
}

fn seed_for(e: &EllipticCurve, n: u64, k: u64) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for v in [e.q(), e.a4_index() as u64, e.a6_index() as u64, n, k] {
        h = (h ^ v).wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Smallest s with l^s·T = O (T of l-power order).
fn l_exponent(c: &ExtCurve, t: &EPoint, l: u64) -> u32 {
    let mut s = 0;
    let mut cur = t.clone();
    while cur != EPoint::Inf {
        cur = c.mul_u64(&cur, l);
        s += 1;
    }
    s
}

/// x with x·B = A in the cyclic group of order l^m generated by B.
fn dlog_l_group(c: &ExtCurve, a: &EPoint, b: &EPoint, l: u64, m: u32) -> Option<BigUint> {
    if m == 0 {
        return (*a == EPoint::Inf).then(BigUint::zero);
    }
    let lb = BigUint::from(l);
    let top = c.mul(b, &lb.pow(m - 1));
    let digits: Vec<EPoint> = (0..l).map(|d| c.mul_u64(&top, d)).collect();
    let mut x = BigUint::zero();
    for i in 0..m {
        let rest = c.sub(a, &c.mul(b, &x));
        let probe = c.mul(&rest, &lb.pow(m - 1 - i));
        let d = digits.iter().position(|pt| *pt == probe)? as u64;
        x += BigUint::from(d) * lb.pow(i);
    }
    (c.mul(b, &x) == *a).then_some(x)
}

/// A basis of E[l^e] inside E(K), assuming E[l^e] ⊂ E(K).
fn prime_power_basis<R: Rng>(c: &ExtCurve, order: &BigUint, l: u64, e: u32, rng: &mut R) -> Result<(EPoint, EPoint)> {
    let lb = BigUint::from(l);
    let mut v = 0u32;
    let mut h = order.clone();
    while (&h % &lb).is_zero() {
        h /= &lb;
        v += 1;
    }
    if v < 2 * e {
        return invalid(format!("E[{l}^{e}] is not rational over the working field"));
    }
    let sample = |rng: &mut R| c.mul(&c.random_point(rng), &h);
    let mut p = sample(rng);
    let mut v1 = l_exponent(c, &p, l);
    for _ in 0..6 {
        let t = sample(rng);
        let s = l_exponent(c, &t, l);
        if s > v1 {
            p = t;
            v1 = s;
        }
    }
    for _ in 0..200 {
        if v1 > v - e {
            return Err(Error::Undetermined("inconsistent l-primary structure".into()));
        }
        let v2 = v - v1;
        let t = sample(rng);
        let s = l_exponent(c, &t, l);
        if s > v1 {
            p = t;
            v1 = s;
            continue;
        }
        let a = c.mul(&t, &lb.pow(v2));
        let b = c.mul(&p, &lb.pow(v2));
        let Some(alpha) = dlog_l_group(c, &a, &b, l, v1 - v2) else {
            continue;
        };
        let q = c.sub(&t, &c.mul(&p, &alpha));
        let pe = c.mul(&p, &lb.pow(v1 - e));
        let qe = c.mul(&q, &lb.pow(v2 - e));
        let p1 = c.mul(&pe, &lb.pow(e - 1));
        let q1 = c.mul(&qe, &lb.pow(e - 1));
        if p1 == EPoint::Inf || q1 == EPoint::Inf {
            continue;
        }
        let mut m = EPoint::Inf;
        let mut dependent = false;
        for _ in 0..l {
            if m == q1 {
                dependent = true;
                break;
            }
            m = c.add(&m, &p1);
        }
        if !dependent {
            return Ok((pe, qe));
        }
    }
    Err(Error::Undetermined(format!("no basis of E[{l}^{e}] found")))
}

/// Degree k of the smallest extension of F_q over which E[n] is rational.
pub fn torsion_degree(e: &EllipticCurve, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    Ok(frobenius_class_rep(e, n)?.order())
}

fn check_n(e: &EllipticCurve, n: u64) -> Result<()> {
    if n == 0 || n > MAX_TORSION {
        return invalid(format!("n = {n} outside 1..={MAX_TORSION}"));
    }
    if gcd_u64(n, e.p()) != 1 {
        return invalid(format!("n = {n} shares a factor with p = {}", e.p()));
    }
    Ok(())
}

/// A basis of E[n] over the minimal extension F_{q^k}.
pub fn torsion_basis(e: &EllipticCurve, n: u64) -> Result<TorsionBasis> {
    check_n(e, n)?;
    let k = torsion_degree(e, n)?;
    torsion_basis_over(e, n, k)
}

/// A basis of E[n] over F_{q^k}, where k must be a multiple of the torsion degree.
pub fn torsion_basis_over(e: &EllipticCurve, n: u64, k: u64) -> Result<TorsionBasis> {
    check_n(e, n)?;
    if k > MAX_EXTENSION {
        return Err(Error::Undetermined(format!("E[{n}] needs degree {k} > {MAX_EXTENSION}")));
    }
    let curve = ExtCurve::over_extension(e, k)?;
    if n == 1 {
        return Ok(TorsionBasis { n, k, curve, p: EPoint::Inf, q: EPoint::Inf });
    }
    let order = curve.order(e.trace());
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(e, n, k));
    let (mut p, mut q) = (EPoint::Inf, EPoint::Inf);
    for (l, a) in factor(n) {
        let (pl, ql) = prime_power_basis(&curve, &order, l, a, &mut rng)?;
        p = curve.add(&p, &pl);
        q = curve.add(&q, &ql);
    }
    Ok(TorsionBasis { n, k, curve, p, q })
}

/// Matrix of the q-power Frobenius on a basis: πP = aP + cQ, πQ = bP + dQ.
pub fn frobenius_matrix_of(basis: &TorsionBasis, trace: i64) -> Result<Mat2> {
    let n = basis.n;
    if n == 1 {
        return Ok(Mat2::identity(1));
    }
    let table = basis.coordinates();
    let c = &basis.curve;
    let look = |pt: &EPoint| {
        table.get(pt).copied().ok_or_else(|| Error::Undetermined("Frobenius image outside E[n]".into()))
    };
    let (a, cc) = look(&c.frobenius(&basis.p))?;
    let (b, d) = look(&c.frobenius(&basis.q))?;
    let m = Mat2 { n, a, b, c: cc, d };
    assert_eq!(m.trace() as i64, trace.rem_euclid(n as i64), "trace of Frobenius matrix");
    assert_eq!(m.det(), c.q % n, "determinant of Frobenius matrix");
    Ok(m)
}

pub fn frobenius_matrix(e: &EllipticCurve, n: u64) -> Result<Mat2> {
    frobenius_matrix_of(&torsion_basis(e, n)?, e.trace())
}

/// #Aut of the group scheme E[n].
///
/// The prime-to-p part is the centralizer of Frobenius in GL₂(ℤ/n), taken
/// from a conjugate of γ; for ordinary E the p-part is φ(p^k)².
pub fn torsion_aut_size(e: &EllipticCurve, n: u64) -> Result<u64> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let p = e.p();
    let mut np = 1;
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
        np *= p;
    }
    if np > 1 && !e.is_ordinary() {
        return invalid("p-torsion of a supersingular curve is not handled");
    }
    let p_part = euler_phi(np).pow(2);
    Ok(p_part * centralizer_size(&frobenius_class_rep(e, rest)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SymplecticType {
    Generic,
    Scalar,
    SquareClass,
    NonsquareClass,
}

/// The symplectic type of E[ℓ] within its trace class mod ℓ.
pub fn symplectic_type(e: &EllipticCurve, l: u64) -> Result<SymplecticType> {
    if l == 2 || !crate::numth::is_prime(l) || e.q() % l == 0 {
        return invalid(format!("{l} is not an odd prime coprime to q"));
    }
    let (a, q) = (e.trace() as i128, e.q() as i128);
    if (a * a - 4 * q).rem_euclid(l as i128) != 0 {
        return Ok(SymplecticType::Generic);
    }
    if frobenius_scalar(e, l)?.is_some() {
        return Ok(SymplecticType::Scalar);
    }
    let basis = torsion_basis(e, l)?;
    let g = frobenius_matrix_of(&basis, e.trace())?;
    let x0 = basis.pairing_log()?;
    // e(P, πP) = e(P, Q)^c, or e(Q, πQ) = e(P, Q)^{-b} when P is an eigenvector.
    let x = if g.c != 0 { g.c * x0 % l } else { (l - g.b) * x0 % l };
    Ok(if kronecker_symbol(x as i64, l as i64) == 1 {
        SymplecticType::SquareClass
    } else {
        SymplecticType::NonsquareClass
    })
}

/// Frobenius matrix and pairing exponent of a torsion basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionData {
    pub n: u64,
    pub k: u64,
    pub gamma: Mat2,
    pub pairing_log: u64,
}

pub fn torsion_data(e: &EllipticCurve, n: u64, k: u64) -> Result<TorsionData> {
    let b = torsion_basis_over(e, n, k)?;
    Ok(TorsionData { n, k, gamma: frobenius_matrix_of(&b, e.trace())?, pairing_log: b.pairing_log()? })
}

/// #Isom⁻¹ from two torsion data sets computed over the same field.
pub fn count_anti_isometries_from(d1: &TorsionData, d2: &TorsionData) -> Result<u64> {
    if d1.n != d2.n || d1.k != d2.k {
        return invalid("torsion data over different fields");
    }
    let n = d1.n;
    if n == 1 {
        return Ok(1);
    }
    let (g1, g2) = (d1.gamma, d2.gamma);
    let target = (n - d1.pairing_log % n) % n;
    Ok(gl2(n)
        .filter(|m| m.mul(&g1) == g2.mul(m) && m.det() * d2.pairing_log % n == target)
        .count() as u64)
}

/// #Isom⁻¹(E[n], E′[n]): Galois-equivariant isomorphisms negating the Weil pairing.
pub fn count_anti_isometries(e1: &EllipticCurve, e2: &EllipticCurve, n: u64) -> Result<u64> {
    if e1.fq() != e2.fq() {
        return invalid("curves over different fields");
    }
    check_n(e1, n)?;
    if n == 1 {
        return Ok(1);
    }
    if (e1.trace() - e2.trace()).rem_euclid(n as i64) != 0 {
        return Ok(0);
    }
    let k = lcm_u64(torsion_degree(e1, n)?, torsion_degree(e2, n)?);
    count_anti_isometries_from(&torsion_data(e1, n, k)?, &torsion_data(e2, n, k)?)
}

/// Whether two matrices are conjugate in GL₂(ℤ/n), by brute force.
pub fn are_conjugate(a: &Mat2, b: &Mat2) -> bool {
    a.n == b.n && gl2(a.n).any(|m| m.mul(a) == b.mul(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_torsion_rational_over_f5() {
        let e = EllipticCurve::from_ints(5, 1, 0).unwrap();
        let b = torsion_basis(&e, 2).unwrap();
        assert_eq!(b.k, 1);
        assert_eq!(frobenius_matrix_of(&b, e.trace()).unwrap(), Mat2::identity(2));
        let t = torsion_basis(&e, 1).unwrap();
        assert_eq!(t.k, 1);
    }

    #[test]
    fn three_torsion_over_f5() {
        let e = EllipticCurve::from_ints(5, 1, 0).unwrap();
        let b = torsion_basis(&e, 3).unwrap();
        assert_eq!(8 % b.k, 0);
        let g = frobenius_matrix_of(&b, e.trace()).unwrap();
        assert_eq!((g.trace(), g.det()), (2, 2));
        assert_eq!(g.order(), b.k);
    }

    #[test]
    fn pairing_properties() {
        for (q, a4, a6, n) in [(11u64, 1i64, 3i64, 3u64), (13, 2, 5, 4), (7, 3, 1, 5), (17, 1, 1, 6)] {
            let e = EllipticCurve::from_ints(q, a4, a6).unwrap();
            let b = torsion_basis(&e, n).unwrap();
            let c = &b.curve;
            assert!(c.contains(&b.p) && c.contains(&b.q));
            assert_eq!(c.mul_u64(&b.p, n), EPoint::Inf);
            let k = &c.field;
            let w = c.weil_pairing(&b.p, &b.q, n).unwrap();
            // exact order n
            assert_eq!(k.pow_u64(&w, n), k.one());
            for (l, _) in factor(n) {
                assert_ne!(k.pow_u64(&w, n / l), k.one());
            }
            // alternating
            let w2 = c.weil_pairing(&b.q, &b.p, n).unwrap();
            assert_eq!(k.mul(&w, &w2), k.one());
            // Galois equivariance
            let wf = c.weil_pairing(&c.frobenius(&b.p), &c.frobenius(&b.q), n).unwrap();
            assert_eq!(wf, k.pow_u64(&w, q));
            // bilinearity in the first argument
            let p2 = c.add(&b.p, &b.q);
            let lhs = c.weil_pairing(&p2, &b.q, n).unwrap();
            assert_eq!(lhs, w);
        }
    }

    #[test]
    fn class_rep_is_conjugate_to_frobenius() {
        for q in [7u64, 11] {
            for (e, _) in super::super::enumerate_curves(q).unwrap() {
                for n in [2u64, 3, 4, 5] {
                    if n == q {
                        continue;
                    }
                    let rep = frobenius_class_rep(&e, n).unwrap();
                    if rep.order() > 12 {
                        continue;
                    }
                    let g = frobenius_matrix(&e, n).unwrap();
                    assert!(are_conjugate(&rep, &g), "q={q} n={n}");
                }
            }
        }
    }
}
