//! Imaginary quadratic discriminants and their class numbers.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{invalid, Result};
use crate::numth::{factor, kronecker_symbol};

/// A negative discriminant Δ = f²·Δ* with Δ* fundamental.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Discriminant {
    pub delta: i64,
    pub conductor: u64,
    pub fundamental: i64,
}

impl Discriminant {
    /// The discriminant of the order of conductor `g` in the same field.
    pub fn with_conductor(&self, g: u64) -> Discriminant {
        Discriminant {
            delta: (g * g) as i64 * self.fundamental,
            conductor: g,
            fundamental: self.fundamental,
        }
    }
}

fn check(delta: i64) -> Result<()> {
    if delta >= 0 {
        return invalid(format!("discriminant {delta} is not negative"));
    }
    if !matches!(delta.rem_euclid(4), 0 | 1) {
        return invalid(format!("{delta} is not 0 or 1 mod 4"));
    }
    Ok(())
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let squarefree = |m: i64| factor(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Split Δ into conductor and fundamental discriminant.
pub fn decompose(delta: i64) -> Result<Discriminant> {
    check(delta)?;
    let mut f = 1u64;
    let mut d = delta;
    for (p, e) in factor(delta.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        let pk = p.pow(e / 2);
        f *= pk;
        d /= (pk * pk) as i64;
    }
    while d % 4 == 0 && matches!((d / 4).rem_euclid(4), 0 | 1) {
        d /= 4;
        f *= 2;
    }
    debug_assert!(is_fundamental(d), "{delta} -> {d}");
    Ok(Discriminant { delta, conductor: f, fundamental: d })
}

/// Counts reduced primitive forms (a, b, c) of discriminant Δ.
pub fn class_number_forms(delta: i64) -> Result<u64> {
    check(delta)?;
    let n = delta.unsigned_abs() as i64;
    let mut h = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= n {
        let mut b = (delta.rem_euclid(2)) as i64;
        while b <= a {
            let num = b * b - delta;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && a.gcd(&b).gcd(&c) == 1 {
                    // (a, -b, c) is also reduced unless b = 0, |b| = a or a = c.
                    h += if b == 0 || b == a || a == c { 1 } else { 2 };
                }
            }
            b += 2;
        }
        a += 1;
    }
    Ok(h)
}

/// h(Δ) from h(Δ*) by the conductor formula, divided by the unit index.
pub fn class_number(delta: i64) -> Result<u64> {
    let d = decompose(delta)?;
    let hstar = class_number_forms(d.fundamental)?;
    Ok(class_number_from(&d, hstar))
}

fn class_number_from(d: &Discriminant, hstar: u64) -> u64 {
    if d.conductor == 1 {
        return hstar;
    }
    let mut num: i64 = hstar as i64;
    for (l, e) in factor(d.conductor) {
        let chi = kronecker_symbol(d.fundamental, l as i64) as i64;
        num *= (l as i64).pow(e - 1) * (l as i64 - chi);
    }
    let units = match d.fundamental {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    (num / units) as u64
}

/// H(Δ) = Σ_{g|f} h(g²Δ*), summing over all orders containing the one of discriminant Δ.
pub fn kronecker_class_number(delta: i64) -> Result<u64> {
    let d = decompose(delta)?;
    let hstar = class_number_forms(d.fundamental)?;
    Ok(divisors(d.conductor)
        .into_iter()
        .map(|g| class_number_from(&d.with_conductor(g), hstar))
        .sum())
}

/// h(Δ) with the orders of discriminant −3 and −4 weighted by 1/3 and 1/2.
pub fn hurwitz_weighted_h(delta: i64) -> Result<Ratio<u64>> {
    check(delta)?;
    Ok(match delta {
        -3 => Ratio::new(1, 3),
        -4 => Ratio::new(1, 2),
        _ => Ratio::from_integer(class_number(delta)?),
    })
}

/// Σ_{g|f} of the weighted class numbers: twice the weighted count of
/// elliptic curves whose Frobenius has discriminant Δ.
pub fn hurwitz_class_number(delta: i64) -> Result<Ratio<u64>> {
    let d = decompose(delta)?;
    divisors(d.conductor)
        .into_iter()
        .try_fold(Ratio::from_integer(0), |acc, g| {
            Ok(acc + hurwitz_weighted_h(d.with_conductor(g).delta)?)
        })
}

fn divisors(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n).filter(|g| n % g == 0).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        let d = decompose(-7).unwrap();
        assert_eq!((d.conductor, d.fundamental), (1, -7));
        let d = decompose(-28).unwrap();
        assert_eq!((d.conductor, d.fundamental), (2, -7));
        let d = decompose(-48).unwrap();
        assert_eq!((d.conductor, d.fundamental), (4, -3));
        let d = decompose(-16).unwrap();
        assert_eq!((d.conductor, d.fundamental), (2, -4));
        assert!(decompose(5).is_err());
        assert!(decompose(-6).is_err());
        assert!(decompose(0).is_err());
    }

    #[test]
    fn decompose_is_exact() {
        for delta in (-5000i64..=-3).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let d = decompose(delta).unwrap();
            assert_eq!((d.conductor * d.conductor) as i64 * d.fundamental, delta);
            assert!(is_fundamental(d.fundamental));
            let again = decompose(d.fundamental).unwrap();
            assert_eq!((again.conductor, again.fundamental), (1, d.fundamental));
        }
    }

    #[test]
    fn forms_examples() {
        assert_eq!(class_number_forms(-3).unwrap(), 1);
        assert_eq!(class_number_forms(-23).unwrap(), 3);
        assert_eq!(class_number_forms(-20).unwrap(), 2);
        assert_eq!(class_number_forms(-4).unwrap(), 1);
        // A few classical values.
        assert_eq!(class_number_forms(-47).unwrap(), 5);
        assert_eq!(class_number_forms(-71).unwrap(), 7);
        assert_eq!(class_number_forms(-163).unwrap(), 1);
        assert_eq!(class_number_forms(-84).unwrap(), 4);
    }

    #[test]
    fn conductor_formula_examples() {
        assert_eq!(class_number(-7).unwrap(), 1);
        assert_eq!(class_number(-28).unwrap(), 1);
        assert_eq!(class_number(-12).unwrap(), 1);
        assert_eq!(class_number(-16).unwrap(), 1);
        assert_eq!(class_number(-75).unwrap(), 2);
    }

    #[test]
    fn kronecker_and_weighted() {
        assert_eq!(kronecker_class_number(-15).unwrap(), 2);
        assert_eq!(kronecker_class_number(-16).unwrap(), 2);
        assert_eq!(kronecker_class_number(-3).unwrap(), 1);
        assert_eq!(hurwitz_weighted_h(-3).unwrap(), Ratio::new(1, 3));
        assert_eq!(hurwitz_weighted_h(-4).unwrap(), Ratio::new(1, 2));
        assert_eq!(hurwitz_weighted_h(-20).unwrap(), Ratio::from_integer(2));
        // Classical Hurwitz numbers: H(3) = 1/3, H(4) = 1/2, H(12) = 4/3.
        assert_eq!(hurwitz_class_number(-12).unwrap(), Ratio::new(4, 3));
        assert_eq!(hurwitz_class_number(-16).unwrap(), Ratio::new(3, 2));
    }

    #[test]
    fn h_le_big_h_with_equality_iff_fundamental() {
        for delta in (-3000i64..=-3).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let h = class_number(delta).unwrap();
            let hh = kronecker_class_number(delta).unwrap();
            assert!(h <= hh);
            assert_eq!(h == hh, is_fundamental(delta), "{delta}");
        }
    }
}
