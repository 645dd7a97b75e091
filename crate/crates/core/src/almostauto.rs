//! Honest almost automorphisms, truncated.
//!
//! An [`AlmostAutomorphism`] is a forest isomorphism `T_d \ T -> T_d \ T'`
//! between the complements of two complete subtrees. On the branch hanging
//! at a leaf `v` of `T` it is given by a piece: a [`LocalActionMap`] on
//! `B(v, m)` sending `v` to its image leaf and the edge towards `T` to the
//! edge towards `T'`. Only the branch part of a piece (`v` and its
//! descendants at distance `< m`) carries meaning; the rest of the ball is
//! a convenient extension.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::local_action::{LocalActionJson, LocalActionMap};
use crate::perm::Perm;
use crate::tree::{CompleteSubtree, Tree, VertexAddress};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostAutomorphism {
    domain: CompleteSubtree,
    codomain: CompleteSubtree,
    leaf_map: BTreeMap<VertexAddress, VertexAddress>,
    pieces: BTreeMap<VertexAddress, LocalActionMap>,
    depth: usize,
}

impl AlmostAutomorphism {
    /// Validates leaf counts, the leaf bijection, piece roots and depths,
    /// and that each piece carries its branch onto the image branch.
    pub fn new(
        domain: CompleteSubtree,
        codomain: CompleteSubtree,
        pieces: BTreeMap<VertexAddress, LocalActionMap>,
    ) -> Result<Self> {
        let (l, l2) = (domain.leaves(), codomain.leaves());
        if l.len() != l2.len() {
            return Err(Error::LeafCountMismatch(l.len(), l2.len()));
        }
        if domain.degree() != codomain.degree() {
            return Err(Error::DegreeMismatch(domain.degree(), codomain.degree()));
        }
        let depth = pieces.values().map(|p| p.radius()).min().unwrap_or(0);
        let mut leaf_map = BTreeMap::new();
        let mut hit = BTreeSet::new();
        for v in l {
            let piece = pieces
                .get(v)
                .ok_or_else(|| Error::InvalidLeafMap(format!("no piece at leaf {v}")))?;
            if piece.domain_root() != v {
                return Err(Error::InvalidLeafMap(format!(
                    "piece at {v} is rooted at {}",
                    piece.domain_root()
                )));
            }
            if piece.radius() != depth {
                return Err(Error::InvalidLeafMap("pieces must share one depth".into()));
            }
            let w = piece.root_image().clone();
            if !l2.contains(&w) || !hit.insert(w.clone()) {
                return Err(Error::InvalidLeafMap(format!("{v} -> {w} is not a leaf bijection")));
            }
            let up = v.last().expect("leaves are not b");
            let up2 = w.last().expect("leaves are not b");
            if piece.sigma_at(v)?.apply(up) != up2 {
                return Err(Error::InvalidLeafMap(format!(
                    "piece at {v} does not carry the branch onto the branch at {w}"
                )));
            }
            leaf_map.insert(v.clone(), w);
        }
        if pieces.len() != l.len() {
            return Err(Error::InvalidLeafMap("pieces at non-leaves".into()));
        }
        Ok(AlmostAutomorphism {
            domain,
            codomain,
            leaf_map,
            pieces,
            depth,
        })
    }

    pub fn identity(tree: CompleteSubtree, depth: usize) -> Result<Self> {
        let d = tree.degree();
        let pieces = tree
            .leaves()
            .iter()
            .map(|v| Ok((v.clone(), LocalActionMap::identity(d, v.clone(), depth)?)))
            .collect::<Result<_>>()?;
        AlmostAutomorphism::new(tree.clone(), tree, pieces)
    }

    /// The almost automorphism induced by a tree automorphism `g` fixing
    /// `b`, with domain `T` and pieces of depth `m`.
    pub fn from_tree_automorphism(g: &LocalActionMap, t: CompleteSubtree, m: usize) -> Result<Self> {
        if !g.domain_root().is_base() || !g.fixes_root() {
            return Err(Error::PreconditionFailed("g must fix the base vertex".into()));
        }
        let image: BTreeSet<VertexAddress> =
            t.vertices().iter().map(|v| g.image(v)).collect::<Result<_>>()?;
        let codomain = CompleteSubtree::new(Tree::new(t.degree())?, image)?;
        let pieces = t
            .leaves()
            .iter()
            .map(|v| Ok((v.clone(), g.restrict(v, m)?)))
            .collect::<Result<_>>()?;
        AlmostAutomorphism::new(t, codomain, pieces)
    }

    pub fn domain(&self) -> &CompleteSubtree {
        &self.domain
    }

    pub fn codomain(&self) -> &CompleteSubtree {
        &self.codomain
    }

    pub fn leaf_map(&self) -> &BTreeMap<VertexAddress, VertexAddress> {
        &self.leaf_map
    }

    pub fn pieces(&self) -> &BTreeMap<VertexAddress, LocalActionMap> {
        &self.pieces
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn degree(&self) -> usize {
        self.domain.degree()
    }

    /// Local permutations on the branch part of each piece.
    fn branch_sigma(&self) -> impl Iterator<Item = (VertexAddress, Perm)> + '_ {
        self.pieces.iter().flat_map(|(v, p)| {
            p.sigma_entries()
                .filter(move |(x, _)| x.descends_from(v))
        })
    }

    /// Image of a vertex on one of the branches, within the piece radius.
    pub fn image(&self, x: &VertexAddress) -> Result<VertexAddress> {
        let v = self
            .domain
            .leaf_above(x)
            .ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
        self.pieces[&v].image(x)
    }

    /// The representative with domain `t_new`. Each new leaf `u` below an
    /// old leaf `v` gets the restriction of the piece at `v` to `B(u, m-k)`,
    /// `k` the largest growth; all pieces are cut to that depth.
    pub fn refine(&self, t_new: &CompleteSubtree) -> Result<Self> {
        if !self.domain.is_subtree_of(t_new) {
            return Err(Error::NotComplete("refinement must contain the domain".into()));
        }
        let growth = t_new
            .leaves()
            .iter()
            .map(|u| u.len() - self.domain.leaf_above(u).expect("below a leaf").len())
            .max()
            .unwrap_or(0);
        if growth >= self.depth {
            return Err(Error::RadiusExhausted(format!(
                "refining by {growth} levels needs depth > {growth}, have {}",
                self.depth
            )));
        }
        let m = self.depth - growth;
        let mut image = self.codomain.vertices().clone();
        for w in t_new.vertices() {
            if !self.domain.contains(w) || self.domain.leaves().contains(w) {
                image.insert(self.image(w)?);
            }
        }
        let codomain = CompleteSubtree::new(Tree::new(self.degree())?, image)?;
        let pieces = t_new
            .leaves()
            .iter()
            .map(|u| {
                let v = self.domain.leaf_above(u).expect("below a leaf");
                Ok((u.clone(), self.pieces[&v].restrict(u, m)?))
            })
            .collect::<Result<_>>()?;
        AlmostAutomorphism::new(t_new.clone(), codomain, pieces)
    }

    /// Same pieces cut to a smaller depth.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        let pieces = self
            .pieces
            .iter()
            .map(|(v, p)| Ok((v.clone(), p.truncate(m)?)))
            .collect::<Result<_>>()?;
        AlmostAutomorphism::new(self.domain.clone(), self.codomain.clone(), pieces)
    }

    pub fn invert(&self) -> Self {
        let pieces = self
            .pieces
            .values()
            .map(|p| (p.root_image().clone(), p.invert()))
            .collect();
        AlmostAutomorphism::new(self.codomain.clone(), self.domain.clone(), pieces)
            .expect("inverse of a valid almost automorphism")
    }

    /// The representative of the same class whose codomain is `t_new`.
    pub fn refine_codomain(&self, t_new: &CompleteSubtree) -> Result<Self> {
        Ok(self.invert().refine(t_new)?.invert())
    }

    /// `self . other`, after refining both to the union of
    /// `other.codomain` and `self.domain`.
    pub fn compose(&self, other: &AlmostAutomorphism) -> Result<Self> {
        let mid = self.domain.union(&other.codomain)?;
        let a = self.refine(&mid)?;
        let b = other.refine_codomain(&mid)?;
        let m = a.depth.min(b.depth);
        let pieces = b
            .pieces
            .iter()
            .map(|(v, p)| {
                let w = p.root_image();
                Ok((v.clone(), a.pieces[w].compose(p)?.truncate(m)?))
            })
            .collect::<Result<_>>()?;
        AlmostAutomorphism::new(b.domain.clone(), a.codomain.clone(), pieces)
    }

    /// Equal as germs at infinity: after refining both to the union of the
    /// domains, leaf maps agree and branch local permutations agree up to
    /// the common depth.
    pub fn equivalent(&self, other: &AlmostAutomorphism) -> Result<bool> {
        let union = self.domain.union(&other.domain)?;
        let a = self.refine(&union)?;
        let b = other.refine(&union)?;
        let m = a.depth.min(b.depth);
        let (a, b) = (a.truncate(m)?, b.truncate(m)?);
        Ok(a.leaf_map == b.leaf_map && a.branch_sigma().eq(b.branch_sigma()))
    }

    /// All branch local permutations lie in `f`.
    pub fn is_honest_for(&self, f: &PermGroup) -> bool {
        self.branch_sigma().all(|(_, s)| f.contains(&s))
    }

    pub fn fixes_leaves(&self) -> bool {
        self.domain == self.codomain && self.leaf_map.iter().all(|(v, w)| v == w)
    }

    /// For a leaf-fixing map, the tree automorphism it extends to: identity
    /// on `T`, the pieces on the branches, on the largest ball around `b`
    /// where every local permutation is known.
    pub fn glue(&self) -> Result<LocalActionMap> {
        if !self.fixes_leaves() {
            return Err(Error::PreconditionFailed("gluing needs a leaf-fixing map".into()));
        }
        let radius = self
            .domain
            .leaves()
            .iter()
            .map(|v| v.len() + self.depth)
            .min()
            .expect("complete subtrees have leaves");
        let id = Perm::identity(self.degree())?;
        let b = VertexAddress::base();
        LocalActionMap::build(self.degree(), b.clone(), b, radius, |x, _| {
            match self.domain.leaf_above(x) {
                Some(v) => self.pieces[&v].sigma_at(x),
                None => Ok(id),
            }
        })
    }

    pub fn to_json(&self) -> AlmostAutomorphismJson {
        AlmostAutomorphismJson {
            degree: self.degree(),
            domain_tree: self.domain.vertices().iter().map(|v| v.to_string()).collect(),
            codomain_tree: self.codomain.vertices().iter().map(|v| v.to_string()).collect(),
            leaf_map: self
                .leaf_map
                .iter()
                .map(|(v, w)| (v.to_string(), w.to_string()))
                .collect(),
            pieces: self.pieces.values().map(|p| p.to_json()).collect(),
            trunc_depth: self.depth,
        }
    }

    pub fn from_json(json: &AlmostAutomorphismJson) -> Result<Self> {
        let d = json.degree;
        let tree = Tree::new(d)?;
        let parse = |xs: &[String]| -> Result<BTreeSet<VertexAddress>> {
            xs.iter().map(|x| VertexAddress::parse(x, d)).collect()
        };
        let domain = CompleteSubtree::new(tree, parse(&json.domain_tree)?)?;
        let codomain = CompleteSubtree::new(tree, parse(&json.codomain_tree)?)?;
        let pieces: BTreeMap<VertexAddress, LocalActionMap> = json
            .pieces
            .iter()
            .map(|p| {
                let p = LocalActionMap::from_json(p)?;
                Ok((p.domain_root().clone(), p))
            })
            .collect::<Result<_>>()?;
        let phi = AlmostAutomorphism::new(domain, codomain, pieces)?;
        for (v, w) in &json.leaf_map {
            let (v, w) = (VertexAddress::parse(v, d)?, VertexAddress::parse(w, d)?);
            if phi.leaf_map.get(&v) != Some(&w) {
                return Err(Error::InvalidLeafMap(format!("leaf map disagrees with pieces at {v}")));
            }
        }
        if json.trunc_depth != phi.depth {
            return Err(Error::InvalidLeafMap("trunc_depth disagrees with pieces".into()));
        }
        Ok(phi)
    }
}

/// Wire form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostAutomorphismJson {
    pub degree: usize,
    pub domain_tree: Vec<String>,
    pub codomain_tree: Vec<String>,
    pub leaf_map: Vec<(String, String)>,
    pub pieces: Vec<LocalActionJson>,
    pub trunc_depth: usize,
}

/// A piece on `B(v, m)` sending `v` to `w`, with local permutations drawn
/// by `pick` from the admissible elements of `f`.
fn build_piece(
    f: &PermGroup,
    v: &VertexAddress,
    w: &VertexAddress,
    m: usize,
    mut pick: impl FnMut(&[Perm]) -> Option<Perm>,
) -> Result<LocalActionMap> {
    let (up, up2) = (v.last().expect("leaf"), w.last().expect("leaf"));
    LocalActionMap::build(f.degree(), v.clone(), w.clone(), m, |x, con| {
        let con = if x == v { Some((up, up2)) } else { con };
        let cands: Vec<Perm> = f
            .elements()
            .iter()
            .filter(|s| con.is_none_or(|(c, t)| s.apply(c) == t))
            .copied()
            .collect();
        pick(&cands).ok_or_else(|| Error::IncompatibleLocalActions {
            vertex: x.to_string(),
            color: up + 1,
        })
    })
}

/// A random almost automorphism `T -> T'` honest for `f`: a random leaf
/// bijection and random `f`-pieces. Returns `None` if the drawn bijection
/// cannot be realised by `f` (a leaf edge color leaves its `f`-orbit).
pub fn random_honest<R: Rng + ?Sized>(
    f: &PermGroup,
    domain: &CompleteSubtree,
    codomain: &CompleteSubtree,
    m: usize,
    rng: &mut R,
) -> Result<Option<AlmostAutomorphism>> {
    let mut targets: Vec<VertexAddress> = codomain.leaves().iter().cloned().collect();
    if targets.len() != domain.leaves().len() {
        return Err(Error::LeafCountMismatch(domain.leaves().len(), targets.len()));
    }
    targets.shuffle(rng);
    let mut pieces = BTreeMap::new();
    for (v, w) in domain.leaves().iter().zip(&targets) {
        match build_piece(f, v, w, m, |c| c.choose(rng).copied()) {
            Ok(p) => {
                pieces.insert(v.clone(), p);
            }
            Err(Error::IncompatibleLocalActions { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    AlmostAutomorphism::new(domain.clone(), codomain.clone(), pieces).map(Some)
}

/// Given `g: T_d \ T -> T_d \ T'` honest for `f`, builds `h: T_d \ T' ->
/// T_d \ T` honest for `fp` with `h g` fixing the leaves of `T`, choosing
/// lexicographically least local permutations from `fp`.
pub fn thm46_h_construction(
    g: &AlmostAutomorphism,
    f: &PermGroup,
    fp: &PermGroup,
) -> Result<AlmostAutomorphism> {
    if !fp.is_subgroup_of(f) {
        return Err(Error::NotASubgroup("F(p) is not contained in F".into()));
    }
    if f.orbits() != fp.orbits() {
        return Err(Error::PreconditionFailed("orbit equality fails for F and F(p)".into()));
    }
    if !g.is_honest_for(f) {
        return Err(Error::PreconditionFailed("g is not honest for F".into()));
    }
    let mut pieces = BTreeMap::new();
    for (v, w) in &g.leaf_map {
        let piece = build_piece(fp, w, v, g.depth, |c| c.first().copied()).map_err(|_| {
            Error::PreconditionFailed(format!("F(p) cannot carry {w} back to {v}"))
        })?;
        pieces.insert(w.clone(), piece);
    }
    AlmostAutomorphism::new(g.codomain.clone(), g.domain.clone(), pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ball(d: usize, n: usize) -> CompleteSubtree {
        Tree::new(d).unwrap().complete_ball(n).unwrap()
    }

    fn v(s: &str, d: usize) -> VertexAddress {
        VertexAddress::parse(s, d).unwrap()
    }

    #[test]
    fn refinement() {
        let id = AlmostAutomorphism::identity(ball(3, 1), 3).unwrap();
        assert_eq!(id.refine(&ball(3, 1)).unwrap(), id);
        let r = id.refine(&ball(3, 2)).unwrap();
        assert_eq!(r.depth(), 2);
        assert_eq!(r.pieces().len(), 6);
        assert!(r.fixes_leaves());
        assert!(r.equivalent(&id).unwrap());
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let s3 = PermGroup::symmetric(3).unwrap();
        let g = random_honest(&s3, &ball(3, 1), &ball(3, 1), 3, &mut rng).unwrap().unwrap();
        let t1 = ball(3, 1).expand(&v("1", 3)).unwrap();
        let r = g.refine(&t1).unwrap();
        for u in [v("1.2", 3), v("1.3", 3)] {
            assert_eq!(r.pieces()[&u], g.pieces()[&v("1", 3)].restrict(&u, 2).unwrap());
        }
        assert!(matches!(g.refine(&ball(3, 4)), Err(Error::RadiusExhausted(_))));
    }

    #[test]
    fn composition_and_inverse() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let s3 = PermGroup::symmetric(3).unwrap();
        let t = ball(3, 1);
        let t2 = t.expand(&v("2", 3)).unwrap();
        let t3 = t.expand(&v("3", 3)).unwrap();
        let g = random_honest(&s3, &t2, &t3, 4, &mut rng).unwrap().unwrap();
        let id = AlmostAutomorphism::identity(t2.clone(), 3).unwrap();
        assert!(g.invert().compose(&g).unwrap().equivalent(&id).unwrap());
        let b = VertexAddress::base();
        let x = crate::universal::random_element(&s3, b.clone(), b.clone(), 5, &mut rng).unwrap();
        let y = crate::universal::random_element(&s3, b.clone(), b.clone(), 5, &mut rng).unwrap();
        let ax = AlmostAutomorphism::from_tree_automorphism(&x, t.clone(), 3).unwrap();
        let ay = AlmostAutomorphism::from_tree_automorphism(&y, t.clone(), 3).unwrap();
        let direct = AlmostAutomorphism::from_tree_automorphism(&x.compose(&y).unwrap(), t, 2).unwrap();
        assert!(ax.compose(&ay).unwrap().equivalent(&direct).unwrap());
    }

    #[test]
    fn leaf_count_mismatch() {
        let pieces = BTreeMap::new();
        assert!(matches!(
            AlmostAutomorphism::new(ball(3, 1), ball(3, 2), pieces),
            Err(Error::LeafCountMismatch(3, 6))
        ));
    }

    #[test]
    fn honesty() {
        let t = ball(3, 1);
        let s = Perm::parse("(12)", 3).unwrap();
        let b = VertexAddress::base();
        let g = LocalActionMap::build(3, b.clone(), b, 4, |_, _| Ok(s)).unwrap();
        let phi = AlmostAutomorphism::from_tree_automorphism(&g, t.clone(), 3).unwrap();
        assert!(phi.is_honest_for(&PermGroup::parse(3, "(12)").unwrap()));
        assert!(!phi.equivalent(&AlmostAutomorphism::identity(t.clone(), 3).unwrap()).unwrap());
        assert!(!phi.is_honest_for(&PermGroup::alternating(3).unwrap()));
        assert!(AlmostAutomorphism::identity(t, 2)
            .unwrap()
            .is_honest_for(&PermGroup::trivial(3).unwrap()));
    }

    #[test]
    fn h_construction() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let s4 = PermGroup::symmetric(4).unwrap();
        let d4 = s4.sylow_subgroup(2).unwrap();
        let t = ball(4, 1);
        for _ in 0..5 {
            let g = random_honest(&s4, &t, &t, 3, &mut rng).unwrap().unwrap();
            let h = thm46_h_construction(&g, &s4, &d4).unwrap();
            assert!(h.is_honest_for(&d4));
            let hg = h.compose(&g).unwrap();
            assert!(hg.fixes_leaves());
            assert!(hg.is_honest_for(&s4));
            assert!(hg.glue().unwrap().is_in_u(&s4));
        }
        let id = AlmostAutomorphism::identity(t, 2).unwrap();
        assert!(thm46_h_construction(&id, &s4, &d4).unwrap().equivalent(&id).unwrap());
        let s6 = PermGroup::symmetric(6).unwrap();
        let id6 = AlmostAutomorphism::identity(ball(6, 1), 2).unwrap();
        assert!(matches!(
            thm46_h_construction(&id6, &s6, &s6.sylow_subgroup(2).unwrap()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(6);
        let s3 = PermGroup::symmetric(3).unwrap();
        let t = ball(3, 1);
        let g = random_honest(&s3, &t, &t, 2, &mut rng).unwrap().unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = AlmostAutomorphism::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
