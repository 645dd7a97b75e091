//! Truncations of fixators `U(F)_T` to balls `B(b, k)`.
//!
//! An element of `U(F)_T` restricted to `B(b, k)` is the same thing as a
//! choice of local permutations in `F` at the interior vertices of the ball
//! that is edge-compatible and fixes the edges of `T`. Such choices extend
//! freely to all of `T_d`, so enumeration and counting are exact.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::local_action::LocalActionMap;
use crate::perm::Perm;
use crate::tree::{ball_index, FiniteSubtree, Tree, VertexAddress};

/// Default bound on the number of elements produced by enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 100_000;

/// `U(F)_T` truncated to `B(b, depth)`.
#[derive(Debug, Clone)]
pub struct TruncatedGroupSpec {
    group: PermGroup,
    fixed: FiniteSubtree,
    depth: usize,
}

impl TruncatedGroupSpec {
    pub fn new(group: PermGroup, fixed: FiniteSubtree, depth: usize) -> Result<Self> {
        Tree::new(group.degree())?;
        if depth == 0 {
            return Err(Error::RadiusExhausted("truncation depth must be at least 1".into()));
        }
        if fixed.height() > depth {
            return Err(Error::PreconditionFailed(format!(
                "fixed subtree of height {} does not fit in B(b, {depth})",
                fixed.height()
            )));
        }
        Ok(TruncatedGroupSpec {
            group,
            fixed,
            depth,
        })
    }

    /// `U(F)_b` at depth `k`.
    pub fn vertex_stabilizer(group: PermGroup, depth: usize) -> Result<Self> {
        TruncatedGroupSpec::new(group, FiniteSubtree::base(), depth)
    }

    /// `U(F)_{B(b, m)}` at depth `k >= m`.
    pub fn ball_fixator(group: PermGroup, m: usize, depth: usize) -> Result<Self> {
        let tree = Tree::new(group.degree())?;
        let fixed = tree.subtree(tree.ball(m)?)?;
        TruncatedGroupSpec::new(group, fixed, depth)
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn fixed(&self) -> &FiniteSubtree {
        &self.fixed
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn degree(&self) -> usize {
        self.group.degree()
    }

    /// Colors that the local permutation at `x` must fix.
    fn fixed_colors(&self, x: &VertexAddress) -> Vec<usize> {
        self.fixed.edge_colors_at(x, self.degree())
    }

    /// Exact order of the truncation.
    ///
    /// Each interior vertex `x` contributes `|F_{C(x)}|` when `x` lies in
    /// `T` (with `C(x)` the colors of `T`-edges at `x`) and `|F_{last(x)}|`
    /// otherwise. For `T = {b}` this is
    /// `|F| * prod_{j<k} prod_{w in P_j} |F_{w_j}|`.
    pub fn order(&self) -> BigUint {
        let index = ball_index(self.degree(), self.depth);
        let mut cache: HashMap<Vec<usize>, u64> = HashMap::new();
        let mut total = BigUint::one();
        for w in &index.words[..index.interior_len(self.depth)] {
            let colors = if self.fixed.contains(w) {
                self.fixed_colors(w)
            } else {
                vec![w.last().expect("b always lies in T")]
            };
            let factor = *cache
                .entry(colors.clone())
                .or_insert_with(|| self.group.pointwise_stabilizer_order(&colors));
            total *= factor;
        }
        total
    }

    /// Streams all elements in lexicographic order: vertices breadth-first,
    /// local permutations ascending, the last vertex varying fastest.
    pub fn iter(&self) -> TruncatedIter {
        TruncatedIter::new(self)
    }

    /// Collects all elements, refusing when the order exceeds `cap`.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<LocalActionMap>> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                what: format!("truncated group of order {order}"),
                cap: cap as u128,
            });
        }
        Ok(self.iter().collect())
    }

    /// A uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> LocalActionMap {
        let table = CandidateTable::new(&self.group);
        let d = self.degree();
        LocalActionMap::build(d, VertexAddress::base(), VertexAddress::base(), self.depth, |x, con| {
            let must_fix = if self.fixed.contains(x) {
                self.fixed_colors(x)
            } else {
                Vec::new()
            };
            let cands = table.candidates(con, &must_fix);
            Ok(*cands.choose(rng).expect("admissible local action exists"))
        })
        .expect("fixator elements are always constructible")
    }

    pub fn contains(&self, g: &LocalActionMap) -> bool {
        g.domain_root().is_base()
            && g.fixes_root()
            && g.radius() >= self.depth
            && g.is_in_u(&self.group)
            && self.fixed.vertices().iter().all(|v| g.image(v).ok().as_ref() == Some(v))
    }
}

/// Group elements bucketed by the image of each color.
struct CandidateTable {
    degree: usize,
    all: Vec<Perm>,
    by_map: Vec<Vec<Perm>>,
}

impl CandidateTable {
    fn new(group: &PermGroup) -> Self {
        let d = group.degree();
        let mut by_map = vec![Vec::new(); d * d];
        for s in group.elements() {
            for c in 0..d {
                by_map[c * d + s.apply(c)].push(*s);
            }
        }
        CandidateTable {
            degree: d,
            all: group.elements().to_vec(),
            by_map,
        }
    }

    fn candidates(&self, con: Option<(usize, usize)>, must_fix: &[usize]) -> Vec<Perm> {
        let base = match con {
            None => &self.all,
            Some((c, t)) => &self.by_map[c * self.degree + t],
        };
        base.iter()
            .filter(|s| must_fix.iter().all(|&x| s.apply(x) == x))
            .copied()
            .collect()
    }
}

/// Odometer over the admissible local-permutation assignments.
pub struct TruncatedIter {
    degree: usize,
    depth: usize,
    table: CandidateTable,
    /// Per interior vertex: parent index, color towards the parent, colors to fix.
    layout: Vec<(usize, usize, Vec<usize>)>,
    levels: Vec<(Vec<Perm>, usize)>,
    sigma: Vec<Perm>,
    done: bool,
}

impl TruncatedIter {
    fn new(spec: &TruncatedGroupSpec) -> Self {
        let d = spec.degree();
        let index = ball_index(d, spec.depth);
        let n = index.interior_len(spec.depth);
        let layout = (0..n)
            .map(|i| {
                let w = &index.words[i];
                let must_fix = if spec.fixed.contains(w) {
                    spec.fixed_colors(w)
                } else {
                    Vec::new()
                };
                if i == 0 {
                    (0, 0, must_fix)
                } else {
                    (index.parent(i), w.last().expect("non-root"), must_fix)
                }
            })
            .collect();
        let mut it = TruncatedIter {
            degree: d,
            depth: spec.depth,
            table: CandidateTable::new(&spec.group),
            layout,
            levels: Vec::with_capacity(n),
            sigma: Vec::with_capacity(n),
            done: false,
        };
        it.fill_from(0);
        it
    }

    fn candidates_at(&self, i: usize) -> Vec<Perm> {
        let (parent, c, ref must_fix) = self.layout[i];
        let con = (i > 0).then(|| (c, self.sigma[parent].apply(c)));
        self.table.candidates(con, must_fix)
    }

    /// Resets levels `from..` to their first candidates.
    fn fill_from(&mut self, from: usize) {
        self.levels.truncate(from);
        self.sigma.truncate(from);
        for i in from..self.layout.len() {
            let cands = self.candidates_at(i);
            match cands.first() {
                Some(&s) => {
                    self.sigma.push(s);
                    self.levels.push((cands, 0));
                }
                None => {
                    self.done = true;
                    return;
                }
            }
        }
    }

    fn advance(&mut self) {
        for j in (0..self.levels.len()).rev() {
            let (ref cands, ref mut pos) = self.levels[j];
            if *pos + 1 < cands.len() {
                *pos += 1;
                self.sigma[j] = cands[*pos];
                self.fill_from(j + 1);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for TruncatedIter {
    type Item = LocalActionMap;

    fn next(&mut self) -> Option<LocalActionMap> {
        if self.done {
            return None;
        }
        let sigma = &self.sigma;
        let mut k = 0;
        let g = LocalActionMap::build(
            self.degree,
            VertexAddress::base(),
            VertexAddress::base(),
            self.depth,
            |_, _| {
                k += 1;
                Ok(sigma[k - 1])
            },
        )
        .expect("odometer assignments are edge-compatible");
        self.advance();
        Some(g)
    }
}

pub fn truncated_order(spec: &TruncatedGroupSpec) -> BigUint {
    spec.order()
}

pub fn enumerate_truncated(spec: &TruncatedGroupSpec) -> Result<Vec<LocalActionMap>> {
    spec.enumerate(DEFAULT_ENUM_CAP)
}

/// `p`-part of a big integer.
pub fn p_part_big(n: &BigUint, p: u64) -> BigUint {
    let mut n = n.clone();
    let mut out = BigUint::one();
    let pb = BigUint::from(p);
    let zero = BigUint::from(0u32);
    while &n % &pb == zero {
        n /= &pb;
        out *= &pb;
    }
    out
}

/// Compares `p`-parts of `|U(F)_T|` and `|U(Fp)_T|` at depth `k`.
pub fn sylow_check_at_depth(
    f: &PermGroup,
    fp: &PermGroup,
    fixed: &FiniteSubtree,
    depth: usize,
    p: u64,
) -> Result<bool> {
    if !fp.is_subgroup_of(f) {
        return Err(Error::NotASubgroup("Fp is not contained in F".into()));
    }
    if !crate::group::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !fp.is_p_group(p) {
        return Err(Error::PreconditionFailed(format!(
            "subgroup of order {} is not a {p}-group",
            fp.order()
        )));
    }
    let big = TruncatedGroupSpec::new(f.clone(), fixed.clone(), depth)?.order();
    let small = TruncatedGroupSpec::new(fp.clone(), fixed.clone(), depth)?.order();
    Ok(p_part_big(&big, p) == p_part_big(&small, p))
}

/// A random element of `U(F)` on `B(domain_root, radius)` taking the root
/// to `root_image`.
pub fn random_element<R: Rng + ?Sized>(
    f: &PermGroup,
    domain_root: VertexAddress,
    root_image: VertexAddress,
    radius: usize,
    rng: &mut R,
) -> Result<LocalActionMap> {
    let table = CandidateTable::new(f);
    LocalActionMap::build(f.degree(), domain_root, root_image, radius, |x, con| {
        table
            .candidates(con, &[])
            .choose(rng)
            .copied()
            .ok_or_else(|| Error::IncompatibleLocalActions {
                vertex: x.to_string(),
                color: con.map(|(c, _)| c + 1).unwrap_or(0),
            })
    })
}
