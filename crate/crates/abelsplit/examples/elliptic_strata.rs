//! Isogeny classes over F_11: strata by endomorphism ring and relative conductors.

use abelsplit::ellipt::{enumerate_curves, relative_conductor, strata, sum_relcond_closed_form};

fn main() -> abelsplit::Result<()> {
    let q = 11;
    for s in strata(q, 4)? {
        println!("a = 4: order disc {}, {} classes, relcond {}", s.order_disc.delta, s.size, s.relcond);
    }
    for (e, w) in enumerate_curves(q)?.iter().filter(|(e, _)| e.trace() == 4) {
        println!("y² = x³ + {}x + {}: 1/#Aut = {w}, relcond {}", e.a4_index(), e.a6_index(), relative_conductor(e)?);
    }
    for q in [101u64, 1009, 10007] {
        let s = sum_relcond_closed_form(q)?;
        println!("q = {q}: Σ relcond = {s} = {:.3}·q", s as f64 / q as f64);
    }
    Ok(())
}
