//! Orbit partitions of U(A3)_B(b,m) on a ball and elements of S3-type
//! automorphisms that are constant, modulo A3, on each orbit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ufp::localization::{
    conjugate_fixator_containment, gamma_membership, orbit_partition_on_ball, random_gamma_member,
};
use ufp::universal::TruncatedGroupSpec;
use ufp::PermGroup;

fn main() -> ufp::Result<()> {
    let s3 = PermGroup::symmetric(3)?;
    let a3 = s3.sylow_subgroup(3)?;
    let cosets = s3.normalizer(&a3)?.cosets(&a3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 4;
    for m in 0..=1 {
        let l = TruncatedGroupSpec::ball_fixator(a3.clone(), m, n)?;
        let part = orbit_partition_on_ball(&l)?.restrict(n - 1)?;
        let mut sizes: Vec<usize> = part.blocks().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        println!("m = {m}: {} orbits on B(b,{}), sizes {sizes:?}", sizes.len(), n - 1);
        let mut hits = 0;
        for _ in 0..20 {
            if let Some(g) = random_gamma_member(&part, &cosets, &mut rng)? {
                assert!(gamma_membership(&g, &part, &cosets)?);
                if conjugate_fixator_containment(&g, &a3, m, n)? {
                    hits += 1;
                }
            }
        }
        println!("  {hits}/20 sampled members conjugate the fixator into U(A3)");
    }
    Ok(())
}
