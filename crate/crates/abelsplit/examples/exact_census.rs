//! Exact c_q and d_q for small primes, with the per-class mass table.

use abelsplit::genus2::exact_cq;

fn main() -> abelsplit::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(13);
    let r = exact_cq(q)?;
    println!("q = {q}: c_q = {:.6}, d_q = {:.6}", r.c_q, r.d_q);
    for (name, mass) in r.rows() {
        println!("  {name:<32} {mass}");
    }
    Ok(())
}
