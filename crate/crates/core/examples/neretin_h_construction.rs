//! For g honest for F, build h honest for F(p) with h g fixing every leaf,
//! then glue h g into a tree automorphism in U(F).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ufp::almostauto::{random_honest, thm46_h_construction};
use ufp::criteria::thm46_hypotheses;
use ufp::{PermGroup, Tree, VertexAddress};

fn main() -> ufp::Result<()> {
    let s4 = PermGroup::symmetric(4)?;
    let d4 = s4.sylow_subgroup(2)?;
    print!("{}", thm46_hypotheses(&s4, 2, 1_000_000)?.to_table());

    let tree = Tree::new(4)?;
    let a = tree.complete_ball(1)?.expand(&VertexAddress::parse("1", 4)?)?;
    let b = tree.complete_ball(1)?.expand(&VertexAddress::parse("3", 4)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let g = random_honest(&s4, &a, &b, 4, &mut rng)?.expect("S4 is transitive");
    let h = thm46_h_construction(&g, &s4, &d4)?;
    let hg = h.compose(&g)?;
    println!("\nh honest for F(2): {}", h.is_honest_for(&d4));
    println!("h g fixes all {} leaves: {}", hg.domain().leaves().len(), hg.fixes_leaves());
    let glued = hg.glue()?;
    println!("glued on B(b,{}): in U(S4) {}", glued.radius(), glued.is_in_u(&s4));
    Ok(())
}
