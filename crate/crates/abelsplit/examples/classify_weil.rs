//! Split classes of quartic Weil polynomials, over F_q and over extensions.

use abelsplit::weilquartic::{base_extend, classify, is_geometrically_split};

fn main() -> abelsplit::Result<()> {
    let q = 17;
    for (a1, a2) in [(2, 35), (0, 34), (8, 50), (0, -34), (1, 10), (0, 0)] {
        let c = classify(q, a1, a2)?;
        let g = is_geometrically_split(q, a1, a2)?;
        println!("q = {q}, (a1, a2) = ({a1}, {a2}): {} {:?}, geometric {} witness {:?}", c.tag.name(), c.factors, g.split, g.witness);
    }
    println!("(0, 0) over F_{{17^2}}: {}", base_extend(q, 0, 0, 2)?);
    Ok(())
}
