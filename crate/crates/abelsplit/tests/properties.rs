use proptest::prelude::*;

use abelsplit::driver::{fit_counting, log_grid, FitModel, RationalGenus2};
use abelsplit::genus2::{weil_coeffs_exhaustive, weil_coeffs_prime, Genus2Curve};
use abelsplit::numth::{gcd_u64, is_prime, kronecker_symbol, mobius_phi_sigma, pow_mod, psi};
use abelsplit::quadorders::{class_number, class_number_forms};
use abelsplit::weilquartic::classify;

fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&p| is_prime(p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi_is_multiplicative(a in 1u64..5000, b in 1u64..5000) {
        prop_assume!(gcd_u64(a, b) == 1);
        prop_assert_eq!(psi(a * b).unwrap(), psi(a).unwrap() * psi(b).unwrap());
    }

    #[test]
    fn phi_sigma_bounds(n in 2u64..100_000) {
        let (mu, phi, sigma) = mobius_phi_sigma(n).unwrap();
        prop_assert!(phi < n && sigma > n);
        prop_assert!(phi <= psi(n).unwrap() && psi(n).unwrap() <= sigma);
        prop_assert!((-1..=1).contains(&mu));
    }

    #[test]
    fn kronecker_is_euler_criterion(d in -10_000i64..10_000, i in 0usize..100) {
        let ps = primes_between(3, 600);
        let p = ps[i % ps.len()];
        let e = pow_mod(d.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        let want = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
        prop_assert_eq!(kronecker_symbol(d, p as i64), want);
    }

    #[test]
    fn class_number_two_ways(k in 1i64..200_000) {
        let d = -(4 * k) + if k % 2 == 0 { 1 } else { 0 };
        prop_assert_eq!(class_number(d).unwrap(), class_number_forms(d).unwrap());
    }

    /// Split exactly when the quartic is a product of two elliptic Weil polynomials.
    #[test]
    fn classify_matches_brute_force(i in 0usize..50, a1 in -200i64..200, a2 in -2000i64..2000) {
        let ps = primes_between(5, 400);
        let q = ps[i % ps.len()] as i64;
        let Ok(c) = classify(q as u64, a1, a2) else { return Ok(()) };
        let r = abelsplit::numth::isqrt(4 * q as u64) as i64;
        let split = (-r..=r).any(|s| (a1 - s).abs() <= r && s * (a1 - s) + 2 * q == a2);
        prop_assert_eq!(c.tag.is_split(), split);
    }

    #[test]
    fn fitter_recovers_power_law(a in 0.2f64..20.0, b in 0.6f64..1.9) {
        let pts: Vec<(f64, f64)> = log_grid(10_000_000, 40)
            .into_iter()
            .map(|z| (z as f64, a * (z as f64).sqrt() / (z as f64).ln().powf(b)))
            .collect();
        let f = fit_counting(&pts, FitModel::Power).unwrap();
        prop_assert!((f.b - b).abs() < 1e-4 && (f.a - a).abs() < 1e-4 * a.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// At a good prime the reduction is a genus-2 curve of the same degree.
    #[test]
    fn good_primes_have_good_reduction(f in proptest::collection::vec(-30i64..30, 6), lead in 1i64..4, sextic: bool) {
        let mut f = f;
        if sextic { f.push(lead) } else { f[5] = lead }
        let Ok(c) = RationalGenus2::new(&f) else { return Ok(()) };
        for p in primes_between(5, 120) {
            let reduced = Genus2Curve::from_ints(p, c.coeffs());
            if c.is_good(p) {
                prop_assert!(reduced.as_ref().map(|r| r.degree() == c.degree()).unwrap_or(false), "p = {}", p);
            } else if c.lead() % p as i64 != 0 {
                prop_assert!(reduced.is_err(), "p = {} divides disc but reduction is squarefree", p);
            }
        }
    }

    /// The fast prime-field path agrees with exhaustive counts over F_p and F_p².
    #[test]
    fn prime_path_matches_exhaustive(f in proptest::collection::vec(0u64..2000, 7), i in 0usize..40, sextic: bool) {
        let ps = primes_between(503, 1500);
        let p = ps[i % ps.len()];
        let mut f: Vec<u64> = f.into_iter().map(|c| c % p).collect();
        if !sextic { f[6] = 0; f[5] = f[5].max(1); }
        if f[6] == 0 && f[5] == 0 { f[6] = 1; }
        let ints: Vec<i64> = f.iter().map(|&c| c as i64).collect();
        let Ok(c) = Genus2Curve::from_ints(p, &ints) else { return Ok(()) };
        prop_assert_eq!(weil_coeffs_prime(p, &f).unwrap(), weil_coeffs_exhaustive(&c).unwrap());
    }
}
