//! Closed form for symmetric and alternating groups, checked against a
//! brute-force stabilizer computation.

use ufp::criteria::{symalt_clause, symalt_crosscheck, GroupKind};

fn main() -> ufp::Result<()> {
    println!("kind  d  p  clause  agrees");
    for kind in [GroupKind::Sym, GroupKind::Alt] {
        for d in 3..=8 {
            for p in [2u64, 3, 5, 7] {
                let clause = symalt_clause(d, p, kind)?.unwrap_or("-");
                println!("{kind:<4} {d:>2} {p:>2}  {clause:<6}  {}", symalt_crosscheck(d, p, kind)?);
            }
        }
    }
    Ok(())
}
