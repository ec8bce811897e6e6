//! Arithmetic in F_{p^k}: square roots and the Frobenius.

use abelsplit::gf::{make_field, sqrt_fq};

fn main() -> abelsplit::Result<()> {
    let f = make_field(7, 3)?;
    println!("F_{} with modulus {:?}", f.order(), f.modulus());
    let x = f.gen();
    let y = f.sqr(&f.add(&x, &f.from_int(3)));
    match sqrt_fq(&y, &f)? {
        Some(r) => println!("sqrt((x + 3)²) = {:?}, check {:?}", r.coeffs(), f.sqr(&r).coeffs()),
        None => println!("not a square"),
    }
    let mut z = x.clone();
    for i in 1..=3 {
        z = f.frobenius(&z);
        println!("frob^{i}(x) = {:?}", z.coeffs());
    }
    println!("nonsquare: {:?}", f.nonsquare().coeffs());
    Ok(())
}
