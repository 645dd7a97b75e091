//! Finite permutation groups with fully enumerated element sets.
//!
//! Target degrees are small (at most 16, in practice at most 12), so every
//! group keeps its complete sorted element list and all subgroup calculus is
//! done by scanning it.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default bound on the number of elements materialized by [`PermGroup::generate`].
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A permutation group together with its sorted element list.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Arc<Vec<Perm>>,
}

impl PermGroup {
    /// Closure of `gens` under composition, failing past `cap` elements.
    pub fn generate(degree: usize, gens: &[Perm], cap: usize) -> Result<PermGroup> {
        let id = Perm::identity(degree)?;
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators: Vec<Perm> = gens.iter().copied().filter(|g| !g.is_identity()).collect();
        let elements = close(&[id], &generators, cap)?;
        Ok(PermGroup {
            degree,
            generators,
            elements: Arc::new(elements),
        })
    }

    /// [`PermGroup::generate`] with the default cap.
    pub fn new(degree: usize, gens: &[Perm]) -> Result<PermGroup> {
        PermGroup::generate(degree, gens, DEFAULT_GROUP_CAP)
    }

    /// Parses a comma-separated generator list in cycle notation.
    pub fn parse(degree: usize, gens: &str) -> Result<PermGroup> {
        let gens = crate::perm::parse_generators(gens, degree)?;
        PermGroup::new(degree, &gens)
    }

    pub fn trivial(degree: usize) -> Result<PermGroup> {
        PermGroup::new(degree, &[])
    }

    pub fn symmetric(degree: usize) -> Result<PermGroup> {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[vec![0, 1]])?);
            gens.push(Perm::from_cycles(degree, &[(0..degree).collect()])?);
        }
        PermGroup::new(degree, &gens)
    }

    pub fn alternating(degree: usize) -> Result<PermGroup> {
        let gens: Vec<Perm> = (2..degree)
            .map(|k| Perm::from_cycles(degree, &[vec![0, 1, k]]))
            .collect::<Result<_>>()?;
        PermGroup::new(degree, &gens)
    }

    /// The regular cyclic group generated by `(1 2 .. d)`.
    pub fn cyclic(degree: usize) -> Result<PermGroup> {
        let gens = if degree >= 2 {
            vec![Perm::from_cycles(degree, &[(0..degree).collect()])?]
        } else {
            vec![]
        };
        PermGroup::new(degree, &gens)
    }

    /// Wraps an element set already known to be a group, picking a small
    /// generating set greedily.
    pub(crate) fn from_closed_elements(degree: usize, mut elements: Vec<Perm>) -> PermGroup {
        elements.sort_unstable();
        elements.dedup();
        let id = Perm::identity(degree).expect("degree validated upstream");
        let mut generators = Vec::new();
        let mut span: Vec<Perm> = vec![id];
        let mut span_set: HashSet<Perm> = span.iter().copied().collect();
        for e in &elements {
            if span_set.contains(e) {
                continue;
            }
            generators.push(*e);
            span = close(&span, &generators, usize::MAX).expect("uncapped closure");
            span_set = span.iter().copied().collect();
            if span.len() == elements.len() {
                break;
            }
        }
        debug_assert_eq!(span.len(), elements.len());
        PermGroup {
            degree,
            generators,
            elements: Arc::new(elements),
        }
    }

    /// Subgroup of elements satisfying `keep`, which must define a subgroup.
    pub(crate) fn filter(&self, keep: impl Fn(&Perm) -> bool) -> PermGroup {
        let elems: Vec<Perm> = self.elements.iter().copied().filter(|g| keep(g)).collect();
        PermGroup::from_closed_elements(self.degree, elems)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements in ascending lexicographic order.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn identity(&self) -> Perm {
        self.elements[0]
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.elements.binary_search(g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// True when every element has `p`-power order.
    pub fn is_p_group(&self, p: u64) -> bool {
        let mut n = self.order();
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(y) = stack.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        (0..self.degree).filter(|&i| seen[i]).collect()
    }

    pub fn orbits(&self) -> OrbitPartition {
        let mut assigned = vec![false; self.degree];
        let mut blocks = Vec::new();
        for x in 0..self.degree {
            if assigned[x] {
                continue;
            }
            let orbit = self.orbit(x);
            for &y in &orbit {
                assigned[y] = true;
            }
            blocks.push(orbit);
        }
        OrbitPartition {
            degree: self.degree,
            blocks,
        }
    }

    /// The point stabilizer `G_x`.
    pub fn stabilizer(&self, x: usize) -> Result<PermGroup> {
        self.check_point(x)?;
        Ok(self.filter(|g| g.apply(x) == x))
    }

    /// Pointwise stabilizer of a set of points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        for &x in points {
            self.check_point(x)?;
        }
        Ok(self.filter(|g| points.iter().all(|&x| g.apply(x) == x)))
    }

    /// Order of the pointwise stabilizer, without building the subgroup.
    pub fn pointwise_stabilizer_order(&self, points: &[usize]) -> u64 {
        self.elements
            .iter()
            .filter(|g| points.iter().all(|&x| g.apply(x) == x))
            .count() as u64
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange {
                point: x + 1,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    /// True when `g` maps this group onto itself under conjugation.
    pub fn is_normalized_by(&self, g: &Perm) -> bool {
        let gi = g.inverse();
        self.generators
            .iter()
            .all(|h| self.contains(&g.mul(h).mul(&gi)))
    }

    /// `N_self(h)`, computed by scanning all elements.
    pub fn normalizer(&self, h: &PermGroup) -> Result<PermGroup> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotASubgroup(format!(
                "subgroup of order {} is not contained in group of order {}",
                h.order(),
                self.order()
            )));
        }
        Ok(self.filter(|g| h.is_normalized_by(g)))
    }

    pub fn intersection(&self, other: &PermGroup) -> Result<PermGroup> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(self.filter(|g| other.contains(g)))
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: &Perm) -> Result<PermGroup> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, g.degree()));
        }
        let gi = g.inverse();
        let elems: Vec<Perm> = self.elements.iter().map(|h| g.mul(h).mul(&gi)).collect();
        Ok(PermGroup::from_closed_elements(self.degree, elems))
    }

    /// Left cosets `xH` of `h` in this group.
    pub fn cosets(&self, h: &PermGroup) -> Result<CosetPartition> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotASubgroup(format!(
                "cannot form cosets of a non-subgroup of order {}",
                h.order()
            )));
        }
        let mut index = HashMap::with_capacity(self.elements.len());
        let mut representatives = Vec::new();
        for x in self.elements.iter() {
            if index.contains_key(x) {
                continue;
            }
            let k = representatives.len();
            representatives.push(*x);
            for s in h.elements() {
                index.insert(x.mul(s), k);
            }
        }
        Ok(CosetPartition {
            ambient: self.clone(),
            subgroup: h.clone(),
            representatives,
            index,
        })
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// Every point stabilizer is trivial.
    pub fn is_semiregular(&self) -> bool {
        self.elements
            .iter()
            .all(|g| g.is_identity() || (0..self.degree).all(|x| g.apply(x) != x))
    }

    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.is_semiregular()
    }

    /// A Sylow `p`-subgroup found by normalizer climbing.
    ///
    /// Starting from the trivial group, repeatedly adjoin the
    /// lexicographically least `p`-element of `N(P) \ P` until the order
    /// reaches the `p`-part of `|G|`. The result is deterministic.
    pub fn sylow_subgroup(&self, p: u64) -> Result<PermGroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let target = p_part(self.order(), p);
        let mut sylow = PermGroup::trivial(self.degree)?;
        while sylow.order() < target {
            let next = self
                .elements
                .iter()
                .find(|g| !sylow.contains(g) && g.is_p_element(p) && sylow.is_normalized_by(g))
                .copied()
                .expect("N(P) \\ P contains a p-element while P is not Sylow");
            let mut gens = sylow.generators.clone();
            gens.push(next);
            let grown = PermGroup::generate(self.degree, &gens, usize::MAX)?;
            assert!(grown.order() > sylow.order(), "normalizer climbing stalled");
            sylow = grown;
        }
        debug_assert!(sylow.is_p_group(p));
        Ok(sylow)
    }

    /// Generators of `F^` = product of the symmetric groups on the orbits:
    /// adjacent transpositions inside each orbit.
    pub fn hat_generators(&self) -> Vec<Perm> {
        self.orbits().sym_generators()
    }

    /// The orbit-closure group `F^`, materialized under `cap`.
    pub fn hat_group(&self, cap: usize) -> Result<PermGroup> {
        let orbits = self.orbits();
        let order = orbits.sym_product_order();
        if order > cap as u128 {
            return Err(Error::CapExceeded {
                what: format!("hat group of order {order}"),
                cap: cap as u128,
            });
        }
        PermGroup::generate(self.degree, &orbits.sym_generators(), cap)
    }

    /// Conjugates of `sub` by a transversal of its normalizer, i.e. every
    /// distinct conjugate exactly once.
    pub fn distinct_conjugates(&self, sub: &PermGroup) -> Result<Vec<PermGroup>> {
        let normalizer = self.normalizer(sub)?;
        let cosets = self.cosets(&normalizer)?;
        cosets
            .representatives()
            .iter()
            .map(|g| sub.conjugate(g))
            .collect()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, <", self.degree, self.order())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">)")
    }
}

/// Closure of `start` under right multiplication by `gens`.
fn close(start: &[Perm], gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let mut seen: HashSet<Perm> = start.iter().copied().collect();
    let mut queue: Vec<Perm> = start.to_vec();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "group closure".into(),
                        cap: cap as u128,
                    });
                }
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    Ok(queue)
}

/// Partition of the points into orbits, each block sorted, blocks ordered
/// by least point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&x))
            .expect("blocks cover all points")
    }

    /// True when `g` maps every block onto itself, i.e. `g` lies in `F^`.
    pub fn preserves(&self, g: &Perm) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| b.contains(&g.apply(x))))
    }

    fn sym_generators(&self) -> Vec<Perm> {
        let mut gens = Vec::new();
        for b in &self.blocks {
            for w in b.windows(2) {
                gens.push(
                    Perm::from_cycles(self.degree, &[vec![w[0], w[1]]])
                        .expect("points lie in range"),
                );
            }
        }
        gens
    }

    /// `prod |Omega_i|!`.
    pub fn sym_product_order(&self) -> u128 {
        self.blocks
            .iter()
            .map(|b| (1..=b.len() as u128).product::<u128>())
            .product()
    }

    /// Blocks rendered with 1-based points.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|x| x + 1).collect())
            .collect()
    }
}

/// Left cosets `xH` of `H` in an ambient group `N`.
#[derive(Clone)]
pub struct CosetPartition {
    ambient: PermGroup,
    subgroup: PermGroup,
    representatives: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl CosetPartition {
    pub fn ambient(&self) -> &PermGroup {
        &self.ambient
    }

    pub fn subgroup(&self) -> &PermGroup {
        &self.subgroup
    }

    /// Least element of each coset, in ascending order.
    pub fn representatives(&self) -> &[Perm] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Index of the coset containing `x`, or `None` when `x` lies outside
    /// the ambient group.
    pub fn coset_of(&self, x: &Perm) -> Option<usize> {
        self.index.get(x).copied()
    }
}

impl fmt::Debug for CosetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetPartition")
            .field("ambient_order", &self.ambient.order())
            .field("subgroup_order", &self.subgroup.order())
            .field("representatives", &self.representatives)
            .finish()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Largest power of `p` dividing `n` (1 when `n == 0` would be meaningless,
/// so `n` must be positive).
pub fn p_part(mut n: u64, p: u64) -> u64 {
    debug_assert!(n > 0 && p > 1);
    let mut out = 1;
    while n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

/// Distinct prime divisors in ascending order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
