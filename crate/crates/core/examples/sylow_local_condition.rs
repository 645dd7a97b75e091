//! The point-stabilizer test for whether U(F(p)) is a Sylow subgroup of
//! U(F) on every finite subtree, with its verdict for every Sylow choice.

use ufp::criteria::{stabilizer_sylow_condition, sylow_choice_sweep};
use ufp::PermGroup;

fn main() -> ufp::Result<()> {
    let cases = [
        (4, "(1234),(12)", 2),
        (4, "(123),(234)", 2),
        (6, "(123456),(12)", 3),
        (6, "(123456),(12)", 2),
        (3, "(123),(12)", 2),
        (6, "(12)(34)(56),(135)", 2),
    ];
    for (d, gens, p) in cases {
        let f = PermGroup::parse(d, gens)?;
        let r = stabilizer_sylow_condition(&f, &f.sylow_subgroup(p)?, p)?;
        let sweep = sylow_choice_sweep(&f, p)?;
        println!(
            "|F| = {:>4} <{gens}> p={p}: {:<5} ({}), every Sylow choice: {}",
            f.order(),
            r.holds,
            r.clause,
            sweep.holds
        );
    }
    Ok(())
}
