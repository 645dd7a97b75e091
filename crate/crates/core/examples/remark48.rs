//! A transitive, non-regular group whose Sylow subgroup is regular and
//! self-normalizing, and a random search for more of them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ufp::corpus::remark_group;
use ufp::criteria::{remark48_check, remark48_search};

fn main() -> ufp::Result<()> {
    let f = remark_group();
    let r = remark48_check(&f, 2)?;
    print!("{}", r.to_table());

    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let found = remark48_search(8, 2, 400, 3, &mut rng)?;
    println!("\nrandom search on 8 points found {} more:", found.len());
    for g in found {
        let gens: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
        println!("  |F| = {:>3}  <{}>", g.order(), gens.join(", "));
    }
    Ok(())
}
