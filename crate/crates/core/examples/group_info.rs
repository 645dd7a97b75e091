//! Basic facts about a permutation group given by generators.
//!
//! cargo run --example group_info -- 6 "(123456),(12)" 3

use ufp::PermGroup;

fn main() -> ufp::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let degree: usize = args.first().map_or(Ok(4), |s| s.parse()).expect("degree");
    let gens = args.get(1).map_or("(1234),(12)", String::as_str);
    let p: u64 = args.get(2).map_or(Ok(2), |s| s.parse()).expect("prime");

    let f = PermGroup::parse(degree, gens)?;
    let fp = f.sylow_subgroup(p)?;
    println!("F = <{gens}> on {degree} points, |F| = {}", f.order());
    println!("orbits {:?}", f.orbits().one_based());
    println!("transitive {}, semiregular {}, regular {}", f.is_transitive(), f.is_semiregular(), f.is_regular());
    println!("F({p}) has order {} with orbits {:?}", fp.order(), fp.orbits().one_based());
    for g in fp.generators() {
        println!("  generator {g}");
    }
    let n = f.normalizer(&fp)?;
    println!("|N_F(F({p}))| = {}, so F has {} Sylow {p}-subgroups", n.order(), f.order() / n.order());
    Ok(())
}
