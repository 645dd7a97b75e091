//! Almost automorphisms as leaf bijections between complete subtrees with
//! local pieces: refinement, composition, inverse and JSON.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ufp::almostauto::random_honest;
use ufp::{PermGroup, Tree, VertexAddress};

fn main() -> ufp::Result<()> {
    let f = PermGroup::alternating(3)?;
    let tree = Tree::new(3)?;
    let t = tree.complete_ball(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t1 = t.expand(&VertexAddress::parse("1", 3)?)?;
    let t2 = t.expand(&VertexAddress::parse("2", 3)?)?;
    let g = random_honest(&f, &t1, &t2, 5, &mut rng)?.expect("A3 is transitive");
    let h = random_honest(&f, &t2, &t1, 5, &mut rng)?.expect("A3 is transitive");

    println!("g: {} leaves -> {} leaves", g.domain().leaves().len(), g.codomain().leaves().len());
    for (x, y) in g.leaf_map() {
        println!("  {x} -> {y}");
    }
    let refined = g.refine(&t1.expand(&VertexAddress::parse("3", 3)?)?)?;
    println!("refined: {} leaves, depth {} -> {}", refined.domain().leaves().len(), g.depth(), refined.depth());
    println!("refinement equivalent to g: {}", refined.equivalent(&g)?);

    let hg = h.compose(&g)?;
    println!("h g honest for A3: {}, fixes leaves: {}", hg.is_honest_for(&f), hg.fixes_leaves());
    let id = g.compose(&g.invert())?;
    println!("g g^-1 fixes leaves: {}", id.fixes_leaves());

    let json = serde_json::to_string(&g.to_json()).expect("serializable");
    println!("JSON: {} bytes", json.len());
    Ok(())
}
