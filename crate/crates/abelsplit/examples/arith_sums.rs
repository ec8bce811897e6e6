//! Σψ(n) and Σψ(n)/n against their asymptotic constants.

use abelsplit::numth::{psi, ratio_to_f64, sum_psi, sum_psi_over_n};

fn main() -> abelsplit::Result<()> {
    println!("psi(1..=12) = {:?}", (1..=12).map(psi).collect::<Result<Vec<_>, _>>()?);
    let pi2 = std::f64::consts::PI.powi(2);
    for x in [1_000u64, 10_000, 100_000] {
        let a = sum_psi(x)? as f64 / (x as f64).powi(2);
        let b = ratio_to_f64(&sum_psi_over_n(x)?) / x as f64;
        println!("x = {x:>7}: Σψ/x² = {a:.6} (→ {:.6}), Σψ(n)/n / x = {b:.6} (→ {:.6})", 15.0 / (2.0 * pi2), 15.0 / pi2);
    }
    Ok(())
}
