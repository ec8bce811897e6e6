//! Class numbers of imaginary quadratic orders, three ways.

use abelsplit::quadorders::{class_number, class_number_forms, decompose, hurwitz_class_number, kronecker_class_number};

fn main() -> abelsplit::Result<()> {
    println!("{:>7} {:>5} {:>4} {:>4} {:>4} {:>6}", "delta", "f", "h", "forms", "H", "Hw");
    for delta in [-3i64, -4, -7, -12, -16, -23, -27, -28, -63, -99, -160, -4004] {
        let d = decompose(delta)?;
        println!(
            "{delta:>7} {:>5} {:>4} {:>4} {:>4} {:>6}",
            d.conductor,
            class_number(delta)?,
            class_number_forms(delta)?,
            kronecker_class_number(delta)?,
            hurwitz_class_number(delta)?.to_string()
        );
    }
    Ok(())
}
