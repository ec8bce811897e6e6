//! Frobenius on E[n], automorphisms of E[n], and anti-isometries between curves.

use abelsplit::ellipt::{count_anti_isometries, enumerate_curves, frobenius_matrix, symplectic_type, torsion_aut_size};

fn main() -> abelsplit::Result<()> {
    let curves: Vec<_> = enumerate_curves(11)?.into_iter().map(|(e, _)| e).filter(|e| e.is_ordinary()).collect();
    let e = &curves[0];
    println!("E: y² = x³ + {}x + {}, trace {}", e.a4_index(), e.a6_index(), e.trace());
    for n in [2u64, 3, 4, 5] {
        println!("  n = {n}: frobenius {:?}, #Aut E[n] = {}", frobenius_matrix(e, n)?, torsion_aut_size(e, n)?);
    }
    let l = 5;
    let same: Vec<_> = curves.iter().filter(|f| (f.trace() - e.trace()) % l as i64 == 0).collect();
    for f in same.iter().take(4) {
        println!(
            "  to y² = x³ + {}x + {}: type {:?}/{:?}, {} anti-isometries of E[5]",
            f.a4_index(),
            f.a6_index(),
            symplectic_type(e, l)?,
            symplectic_type(f, l)?,
            count_anti_isometries(e, f, l)?
        );
    }
    Ok(())
}
