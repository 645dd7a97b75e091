//! Orders of truncated stabilizers U(F)_T on B(b, n) against brute-force
//! enumeration, and the p-part comparison that detects a failed Sylow test.

use ufp::universal::{p_part_big, TruncatedGroupSpec};
use ufp::{FiniteSubtree, PermGroup, Tree};

fn main() -> ufp::Result<()> {
    let s3 = PermGroup::symmetric(3)?;
    let tree = Tree::new(3)?;
    let subtrees = [
        ("{b}", FiniteSubtree::base()),
        ("B(b,1)", FiniteSubtree::from(tree.complete_ball(1)?)),
    ];
    for (name, t) in &subtrees {
        for depth in 1..=3 {
            let spec = TruncatedGroupSpec::new(s3.clone(), t.clone(), depth)?;
            let counted = spec.iter().count();
            println!("U(S3)_{name:<7} depth {depth}: formula {:>5}, enumerated {counted:>5}", spec.order());
        }
    }

    println!();
    let fp = s3.sylow_subgroup(2)?;
    println!("depth   |U(S3)_b|_2   |U(F(2))_b|");
    for depth in 1..=6 {
        let a = TruncatedGroupSpec::vertex_stabilizer(s3.clone(), depth)?.order();
        let b = TruncatedGroupSpec::vertex_stabilizer(fp.clone(), depth)?.order();
        println!("{depth:>5} {:>13} {b:>13}", p_part_big(&a, 2));
    }
    Ok(())
}
