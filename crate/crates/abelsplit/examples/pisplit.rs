//! π_split(z) for y² = x⁵ + x + 6 and the two fitted growth laws.

use abelsplit::driver::{fit_counting, pisplit, FitModel, RationalGenus2, GRID, ORACLE_LIMIT};

fn main() -> abelsplit::Result<()> {
    let zmax: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let c: RationalGenus2 = "x^5+x+6".parse()?;
    println!("disc = {}, good primes ≤ 50: {:?}", c.disc(), c.good_primes(50));
    let r = pisplit(&c, zmax, GRID, ORACLE_LIMIT)?;
    println!("first split primes: {:?}", &r.split[..r.split.len().min(12)]);
    for (z, n) in r.samples.iter().step_by(6) {
        println!("  π_split({z}) = {n}");
    }
    let pts: Vec<(f64, f64)> = r.samples.iter().map(|&(z, n)| (z as f64, n as f64)).collect();
    let c1 = fit_counting(&pts, FitModel::Constant)?;
    let c2 = fit_counting(&pts, FitModel::Power)?;
    println!("c·√z/log z: c = {:.4} (rms rel. error {:.3})", c1.a, c1.residual);
    println!("a·√z/(log z)^b: a = {:.4}, b = {:.4} (rms rel. error {:.3})", c2.a, c2.b, c2.residual);
    Ok(())
}
