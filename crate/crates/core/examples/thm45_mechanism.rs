//! Why a localization fails when some local permutation leaves F(p):
//! reduce g to k = h^-1 g fixing B(b, n), then find s in the fixator of
//! B(b, n) whose conjugate by k has a local action outside F(p).
//! The converse direction checks g in G(F(p), F) at finite depth.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ufp::criteria::thm45_hypotheses;
use ufp::localization::{conjugate_fixator_containment, random_g_element, thm45_obstruction_witness};
use ufp::universal::random_element;
use ufp::{PermGroup, VertexAddress};

fn main() -> ufp::Result<()> {
    let s4 = PermGroup::symmetric(4)?;
    let d4 = s4.sylow_subgroup(2)?;
    print!("{}", thm45_hypotheses(&s4, &s4, 2)?.to_table());

    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let b = VertexAddress::base();
    for n in 1..=2 {
        let g = loop {
            let g = random_element(&s4, b.clone(), b.clone(), 3, &mut rng)?;
            if g.sigma_entries().any(|(x, s)| x.len() == n && !d4.contains(&s)) {
                break g;
            }
        };
        let w = thm45_obstruction_witness(&s4, &s4, &d4, n, &g)?;
        println!(
            "\nn = {n}: k = h^-1 g fixes B(b,{n}) and has sigma {} at {}",
            w.reduced.sigma_at(&w.singular_vertex)?,
            w.singular_vertex
        );
        println!(
            "  conjugating s (sigma(s,b) = {}) gives sigma {} at {}, outside F(2)",
            w.conjugation.s.sigma_at(&b)?,
            w.conjugation.sigma,
            w.conjugation.vertex
        );
    }

    println!();
    for sr in 0..=2 {
        let g = random_g_element(&d4, &s4, sr, 3, &mut rng)?;
        let radius = g.singularity_radius(&d4);
        for m in radius.max(1)..3 {
            let ok = conjugate_fixator_containment(&g, &d4, m, 3)?;
            println!("singularities within distance {radius}: g U(F(2))_B(b,{m}) g^-1 inside U(F(2)) on B(b,3): {ok}");
        }
    }
    Ok(())
}
