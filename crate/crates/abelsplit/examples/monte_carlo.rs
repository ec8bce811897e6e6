//! Sampled c_q at a larger prime, compared with the exact value at q = 17.

use abelsplit::genus2::{exact_cq, monte_carlo_cq};

fn main() -> abelsplit::Result<()> {
    let exact = exact_cq(17)?.c_q;
    let r = monte_carlo_cq(17, 20_000, 7)?;
    println!("q = 17: exact {exact:.5}, sampled {:.5} ± {:.5}", r.c_q, r.stderr.unwrap());
    let r = monte_carlo_cq(1031, 5_000, 7)?;
    println!("q = 1031: c_q ≈ {:.4} ± {:.4}, d_q ≈ {:.4} ± {:.4}", r.c_q, r.stderr.unwrap(), r.d_q, r.d_stderr.unwrap());
    Ok(())
}
