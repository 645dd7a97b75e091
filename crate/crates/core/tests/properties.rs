use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ufp::almostauto::{random_honest, AlmostAutomorphismJson};
use ufp::group::p_part;
use ufp::local_action::LocalActionJson;
use ufp::localization::cocycle_identity_check;
use ufp::universal::{random_element, TruncatedGroupSpec};
use ufp::{AlmostAutomorphism, LocalActionMap, Perm, PermGroup, Tree, VertexAddress};

fn perm(d: usize) -> impl Strategy<Value = Perm> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(&v).unwrap())
}

fn perms(d: usize, n: usize) -> impl Strategy<Value = Vec<Perm>> {
    prop::collection::vec(perm(d), n)
}

fn vertex(d: usize, max_len: usize) -> impl Strategy<Value = VertexAddress> {
    prop::collection::vec(0..d, 0..=max_len).prop_map(move |cs| {
        let mut word: Vec<usize> = Vec::new();
        for c in cs {
            if word.last() != Some(&c) {
                word.push(c);
            }
        }
        VertexAddress::from_colors(d, &word).unwrap()
    })
}

/// An element of U(S_d) on B(b, r) fixing the base vertex.
fn stabilizer_element(d: usize, r: usize, seed: u64) -> LocalActionMap {
    let f = PermGroup::symmetric(d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element(&f, VertexAddress::base(), VertexAddress::base(), r, &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_applies_right_factor_first(ps in perms(7, 2), x in 0usize..7) {
        prop_assert_eq!(ps[0].mul(&ps[1]).apply(x), ps[0].apply(ps[1].apply(x)));
    }

    #[test]
    fn perm_group_laws(ps in perms(6, 3)) {
        let (a, b, c) = (ps[0], ps[1], ps[2]);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        let o = a.order();
        prop_assert!((0..o).fold(Perm::identity(6).unwrap(), |acc, _| acc.mul(&a)).is_identity());
    }

    #[test]
    fn cycle_notation_round_trips(p in perm(9)) {
        prop_assert_eq!(Perm::parse(&p.to_cycle_string(), 9).unwrap(), p);
    }

    #[test]
    fn generated_group_is_closed_and_has_sylow_of_right_order(ps in perms(5, 2)) {
        let g = PermGroup::new(5, &ps).unwrap();
        prop_assert_eq!(120 % g.order(), 0);
        for x in g.elements().iter().take(8) {
            for y in g.elements().iter().take(8) {
                prop_assert!(g.contains(&x.mul(y)));
            }
        }
        for p in [2u64, 3, 5] {
            let s = g.sylow_subgroup(p).unwrap();
            prop_assert_eq!(s.order(), p_part(g.order(), p));
            prop_assert!(s.is_subgroup_of(&g));
        }
    }

    #[test]
    fn enumeration_matches_order(ps in perms(4, 2), depth in 1usize..=2) {
        let f = PermGroup::new(4, &ps).unwrap();
        let spec = TruncatedGroupSpec::vertex_stabilizer(f, depth).unwrap();
        let n = spec.iter().count();
        prop_assert_eq!(num_bigint::BigUint::from(n), spec.order());
        for g in spec.iter().take(20) {
            prop_assert!(spec.contains(&g));
        }
    }

    #[test]
    fn vertex_words_form_a_group(v in vertex(4, 6), w in vertex(4, 6)) {
        prop_assert!(v.mul(&v.inverse()).is_base());
        prop_assert_eq!(v.distance(&w), w.distance(&v));
        prop_assert_eq!(v.mul(&v.offset_to(&w)), w.clone());
        prop_assert_eq!(v.to_string().parse::<VertexAddress>().unwrap(), v);
    }

    #[test]
    fn compose_with_inverse_is_identity(seed in any::<u64>(), r in 1usize..=3) {
        let g = stabilizer_element(4, r, seed);
        let e = g.compose(&g.invert()).unwrap();
        prop_assert_eq!(e, LocalActionMap::identity(4, VertexAddress::base(), r).unwrap());
    }

    #[test]
    fn compose_is_associative(seeds in any::<[u64; 3]>()) {
        let [a, b, c] = seeds.map(|s| stabilizer_element(3, 3, s));
        prop_assert_eq!(
            a.compose(&b).unwrap().compose(&c).unwrap(),
            a.compose(&b.compose(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn cocycle_holds_for_stabilizer_elements(seeds in any::<[u64; 2]>(), v in vertex(3, 2)) {
        let g = stabilizer_element(3, 4, seeds[0]);
        let s = stabilizer_element(3, 4, seeds[1]);
        prop_assert!(cocycle_identity_check(&g, &s, &v).unwrap());
    }

    #[test]
    fn local_action_json_round_trips(seed in any::<u64>()) {
        let g = stabilizer_element(3, 3, seed);
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: LocalActionJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(LocalActionMap::from_json(&back).unwrap(), g);
    }

    #[test]
    fn almost_automorphism_json_round_trips(seed in any::<u64>()) {
        let f = PermGroup::symmetric(3).unwrap();
        let t = Tree::new(3).unwrap().complete_ball(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_honest(&f, &t, &t, 3, &mut rng).unwrap().unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: AlmostAutomorphismJson = serde_json::from_str(&text).unwrap();
        let g2 = AlmostAutomorphism::from_json(&back).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert!(g.compose(&g.invert()).unwrap().equivalent(&AlmostAutomorphism::identity(t, 2).unwrap()).unwrap());
    }
}
