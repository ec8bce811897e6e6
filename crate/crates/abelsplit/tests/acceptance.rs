//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abelsplit::driver::{fit_counting, log_grid, pisplit, FitModel, RationalGenus2};
use abelsplit::ellipt::torsion::torsion_degree;
use abelsplit::ellipt::{
    count_anti_isometries, enumerate_curves, relative_conductor, sum_relcond_closed_form, sum_relcond_enumerated,
    symplectic_type, torsion_aut_size, EllipticCurve,
};
use abelsplit::genus2::{enumerate_genus2_weighted, exact_cq, monte_carlo_cq};
use abelsplit::numth::{euler_phi, gcd_u64, is_prime, prime_power, psi, ratio_to_f64, sum_psi, sum_psi_over_n};
use abelsplit::quadorders::{class_number, class_number_forms, kronecker_class_number};

type Outcome = (bool, String);

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("exact c_q for q = 17..41 matches Figure 2 to 4 decimals", c1_exact_cq),
        ("weighted masses q^3 and q^3 + q^2", c2_masses),
        ("relative-conductor sums", c3_relcond),
        ("class-number oracle equivalence", c4_class_numbers),
        ("arithmetic constants 15/(2 pi^2) and 15/pi^2", c5_arith),
        ("sandwich bounds for #Aut E[n]", c6_sandwich),
        ("at least l - 1 anti-isometries for l = 5", c7_anti_isometries),
        ("pi_split oracle agreement for y^2 = x^5 + x + 6", c8_pisplit),
        ("fitter recovers exact-model parameters", c9_fit),
        ("Monte Carlo c_q consistency", c10_monte_carlo),
    ];
    let only: Vec<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = f();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} [{id}] {name}: {detail} ({:.1} s)", t.elapsed().as_secs_f64());
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| matches!(prime_power(q), Some((p, _)) if p >= 5)).collect()
}

fn c1_exact_cq() -> Outcome {
    let want = [(17, 0.7989), (19, 0.8058), (23, 0.8006), (29, 0.8113), (31, 0.8118), (37, 0.8228), (41, 0.8188)];
    let mut ok = true;
    let mut got = Vec::new();
    for (q, c) in want {
        match exact_cq(q) {
            Ok(r) => {
                ok &= (r.c_q - c).abs() <= 0.00005;
                got.push(format!("c_{q}={:.6}", r.c_q));
            }
            Err(e) => {
                ok = false;
                got.push(format!("c_{q}: {e}"));
            }
        }
    }
    (ok, got.join(" "))
}

fn c2_masses() -> Outcome {
    let mut ok = true;
    for q in [5u64, 7, 11, 13, 17] {
        let classes = enumerate_genus2_weighted(q).expect("class enumeration");
        let mass: Ratio<u64> = classes.iter().map(|(_, w)| *w).sum();
        ok &= mass == Ratio::from_integer(q.pow(3));
        let total = exact_cq(q).expect("census").total_mass();
        ok &= total == BigRational::from_integer(BigInt::from(q.pow(3) + q.pow(2)));
    }
    (ok, "q = 5, 7, 11, 13, 17".into())
}

fn c3_relcond() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut primes = Vec::new();
    while primes.len() < 10 {
        let q = rng.gen_range(1001..10_000u64);
        if is_prime(q) && !primes.contains(&q) {
            primes.push(q);
        }
    }
    let ratios: Vec<f64> = primes.iter().map(|&q| sum_relcond_closed_form(q).unwrap() as f64 / q as f64).collect();
    let in_band = ratios.iter().all(|r| (2.07..=4.27).contains(r));
    let qs = prime_powers(5, 200);
    let bad: Vec<u64> =
        qs.iter().copied().filter(|&q| sum_relcond_closed_form(q).unwrap() != sum_relcond_enumerated(q).unwrap()).collect();
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(a, b), &r| (a.min(r), b.max(r)));
    (
        in_band && bad.is_empty(),
        format!("S(q)/q in [{lo:.3}, {hi:.3}] over {primes:?}; {} prime powers <= 200, mismatches {bad:?}", qs.len()),
    )
}

fn c4_class_numbers() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for d in -50_000i64..=-3 {
        if d.rem_euclid(4) > 1 {
            continue;
        }
        n += 1;
        if class_number(d).unwrap() != class_number_forms(d).unwrap() {
            bad.push(d);
        }
    }
    let mut classes_checked = 0;
    for q in prime_powers(5, 101) {
        let (p, _) = prime_power(q).unwrap();
        let mut by_trace = std::collections::HashMap::<i64, u64>::new();
        for (e, _) in enumerate_curves(q).unwrap() {
            *by_trace.entry(e.trace()).or_default() += 1;
        }
        let t = abelsplit::numth::isqrt(4 * q) as i64;
        for a in -t..=t {
            if a.rem_euclid(p as i64) == 0 || a * a >= 4 * q as i64 {
                continue;
            }
            classes_checked += 1;
            let h = kronecker_class_number(a * a - 4 * q as i64).unwrap();
            if by_trace.get(&a).copied().unwrap_or(0) != h {
                bad.push(1_000_000 * q as i64 + a);
            }
        }
    }
    (bad.is_empty(), format!("{n} discriminants, {classes_checked} isogeny classes, mismatches {bad:?}"))
}

fn c5_arith() -> Outcome {
    let x = 1_000_000u64;
    let pi2 = std::f64::consts::PI.powi(2);
    let a = sum_psi(x).unwrap() as f64 / 1e12;
    let b = ratio_to_f64(&sum_psi_over_n(x).unwrap()) / x as f64;
    let (da, db) = ((a - 15.0 / (2.0 * pi2)).abs(), (b - 15.0 / pi2).abs());
    (da < 1e-3 && db < 1e-3, format!("sum_psi/x^2 = {a:.6} (err {da:.2e}), sum_psi_over_n/x = {b:.6} (err {db:.2e})"))
}

fn c6_sandwich() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for q in prime_powers(5, 50) {
        for (e, _) in enumerate_curves(q).unwrap() {
            let rc = relative_conductor(&e).unwrap();
            for n in 2..=10u64 {
                if gcd_u64(n, q) != 1 || torsion_degree(&e, n).unwrap() > 48 {
                    continue;
                }
                let g = gcd_u64(n, rc);
                let aut = torsion_aut_size(&e, n).unwrap();
                let (phi, psi_n) = (euler_phi(n), psi(n).unwrap());
                checked += 1;
                if !(phi * phi * g * g <= aut && aut <= phi * psi_n * g * g) {
                    bad.push((q, e.a4_index(), e.a6_index(), n));
                }
            }
        }
    }
    (bad.is_empty(), format!("{checked} (curve, n) pairs, violations {bad:?}"))
}

fn c7_anti_isometries() -> Outcome {
    let l = 5;
    let mut pairs = 0;
    let mut min = u64::MAX;
    for q in [11u64, 13] {
        let curves: Vec<(EllipticCurve, _)> = enumerate_curves(q)
            .unwrap()
            .into_iter()
            .filter(|(e, _)| e.is_ordinary())
            .map(|(e, _)| {
                let t = symplectic_type(&e, l).unwrap();
                (e, t)
            })
            .collect();
        for (e1, t1) in &curves {
            for (e2, t2) in &curves {
                if t1 != t2 || (e1.trace() - e2.trace()).rem_euclid(l as i64) != 0 {
                    continue;
                }
                pairs += 1;
                min = min.min(count_anti_isometries(e1, e2, l).unwrap());
            }
        }
    }
    (pairs > 0 && min >= l - 1, format!("{pairs} same-type pairs, minimum count {min}"))
}

fn c8_pisplit() -> Outcome {
    let c: RationalGenus2 = "x^5+x+6".parse().unwrap();
    let r = match pisplit(&c, 1_000_000, 40, 1000) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let monotone = r.samples.windows(2).all(|w| w[0].1 <= w[1].1);
    let ok = r.oracle_mismatches.is_empty() && r.oracle_checked > 0 && monotone && r.undetermined.is_empty();
    let pts: Vec<(f64, f64)> = r.samples.iter().map(|&(z, n)| (z as f64, n as f64)).collect();
    let fit = |m| fit_counting(&pts, m).map(|f| (f.a, f.b)).unwrap_or((f64::NAN, f64::NAN));
    let (c0, _) = fit(FitModel::Constant);
    let (a, b) = fit(FitModel::Power);
    (
        ok,
        format!(
            "{} oracle checks, {} mismatches, {} undetermined of {} good primes, pi_split(1e6) = {}; \
             informational fit c = {c0:.4}, (a, b) = ({a:.4}, {b:.5}) [published fit at z = 2^30: 4.4651, 1.02269]",
            r.oracle_checked,
            r.oracle_mismatches.len(),
            r.undetermined.len(),
            r.good,
            r.split.len()
        ),
    )
}

fn c9_fit() -> Outcome {
    let grid = log_grid(1 << 30, 40);
    let synth = |a: f64, b: f64| -> Vec<(f64, f64)> {
        grid.iter().map(|&z| (z as f64, a * (z as f64).sqrt() / (z as f64).ln().powf(b))).collect()
    };
    let c = fit_counting(&synth(4.4651, 1.0), FitModel::Constant).unwrap();
    let mut ok = (c.a - 4.4651).abs() < 1e-6;
    let mut worst: f64 = 0.0;
    for (a0, b0) in [(1.3, 1.02269), (4.0, 0.75), (0.5, 1.6)] {
        let f = fit_counting(&synth(a0, b0), FitModel::Power).unwrap();
        let err = (f.a - a0).abs().max((f.b - b0).abs());
        worst = worst.max(err);
        ok &= err < 1e-4;
    }
    (ok, format!("constant error {:.1e}, worst (a, b) error {worst:.1e}", (c.a - 4.4651).abs()))
}

fn c10_monte_carlo() -> Outcome {
    let exact = exact_cq(17).unwrap().c_q;
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let r = monte_carlo_cq(17, 20_000, seed).unwrap();
        worst = worst.max((r.c_q - exact).abs() / r.stderr.unwrap());
    }
    let r = monte_carlo_cq(1031, 100_000, 1031).unwrap();
    let se = r.stderr.unwrap();
    let band = 3.0 * se + 0.0002;
    let dev = (r.c_q - 0.8387).abs();
    (
        worst < 4.0 && dev <= band,
        format!(
            "q=17: max |z| = {worst:.2} over 10 seeds; q=1031: c = {:.4} +- {se:.4}, |c - 0.8387| = {dev:.4} vs 3 sigma + 0.0002 = {band:.4}",
            r.c_q
        ),
    )
}
