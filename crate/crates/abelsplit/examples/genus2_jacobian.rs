//! Zeta data of y² = x⁵ + x + 6 at a few primes: point counts, #J and a split test.

use abelsplit::genus2::{genus2_count, jacobian_order, weil_coeffs, weil_coeffs_prime, Genus2Curve};
use abelsplit::weilquartic::classify;

fn main() -> abelsplit::Result<()> {
    for p in [11u64, 101, 1009] {
        let c = Genus2Curve::from_ints(p, &[6, 1, 0, 0, 0, 1])?;
        let (a1, a2) = weil_coeffs(&c)?;
        println!(
            "p = {p}: #C = {}, #C(F_p²) = {}, #J = {}, (a1, a2) = ({a1}, {a2}), {}",
            genus2_count(&c, 1)?,
            genus2_count(&c, 2)?,
            jacobian_order(&c)?,
            classify(p, a1, a2)?.tag.name()
        );
    }
    let p = 999_983;
    let (a1, a2) = weil_coeffs_prime(p, &[6, 1, 0, 0, 0, 1])?;
    println!("p = {p}: (a1, a2) = ({a1}, {a2}), {}", classify(p, a1, a2)?.tag.name());
    Ok(())
}
