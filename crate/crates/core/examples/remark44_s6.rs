//! Witnesses a_w in S6 for p = 3, and the normalizer of the Sylow subgroup.

use ufp::criteria::remark44_check;
use ufp::PermGroup;

fn main() -> ufp::Result<()> {
    let s6 = PermGroup::symmetric(6)?;
    print!("{}", remark44_check(&s6, 3)?.to_table());
    let p3 = s6.sylow_subgroup(3)?;
    let n = s6.normalizer(&p3)?;
    println!("|N(F(3))| = {}, index {}", n.order(), s6.order() / n.order());
    Ok(())
}
