//! Indices [U : U ∩ g^-1 U g] for ball fixators U of U(F(p)) and a
//! translation g, on finite balls.

use ufp::localization::commensuration_indices;
use ufp::{LocalActionMap, PermGroup, VertexAddress};

fn main() -> ufp::Result<()> {
    let s4 = PermGroup::symmetric(4)?;
    let d4 = s4.sylow_subgroup(2)?;
    let g = LocalActionMap::translation(4, VertexAddress::parse("1", 4)?, 4)?;
    let report = commensuration_indices(&g, &d4, &[(0, 2), (1, 2), (1, 3), (2, 3)])?;
    println!("    m  n   |U|  |U∩U^g|  index  sym.index  radius");
    for e in &report.entries {
        let show = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        println!(
            "{:>5} {:>2} {:>5} {:>8} {:>6} {:>10} {:>7}",
            e.m,
            e.n,
            e.order,
            e.intersection,
            show(e.index),
            show(e.symmetric_index),
            e.radius_of_validity
        );
    }
    Ok(())
}
