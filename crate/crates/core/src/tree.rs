//! The `d`-regular tree with its canonical legal coloring.
//!
//! A vertex is addressed by the reduced color word of the path from the
//! base vertex `b`; the empty word is `b`. The edge between `w` and `w.c`
//! carries color `c`, so every vertex sees each color exactly once. Moving
//! from `w` along color `c` appends `c`, or drops the last letter when it
//! equals `c`. Under this multiplication the addresses form the free product
//! of `d` copies of `Z/2`, and the ball around any vertex `v` is `v * ball(r)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default bound on the number of vertices in any enumerated ball.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// A vertex of `T_d`, as a reduced word of 0-based colors.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexAddress {
    word: Vec<u8>,
}

impl Ord for VertexAddress {
    /// Shorter words first, then lexicographic.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for VertexAddress {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl VertexAddress {
    /// The base vertex `b`.
    pub fn base() -> VertexAddress {
        VertexAddress { word: Vec::new() }
    }

    /// Builds an address from 0-based colors, checking reducedness.
    pub fn from_colors(degree: usize, colors: &[usize]) -> Result<VertexAddress> {
        let mut word = Vec::with_capacity(colors.len());
        for &c in colors {
            if c >= degree {
                return Err(Error::MalformedAddress(format!(
                    "color {} outside 1..={degree}",
                    c + 1
                )));
            }
            if word.last() == Some(&(c as u8)) {
                return Err(Error::MalformedAddress(format!(
                    "repeated color {} is not reduced",
                    c + 1
                )));
            }
            word.push(c as u8);
        }
        Ok(VertexAddress { word })
    }

    /// Parses `2.3.1` (1-based colors) or `ε` / `b` / empty for the base.
    pub fn parse(text: &str, degree: usize) -> Result<VertexAddress> {
        let t = text.trim();
        if t.is_empty() || t == "ε" || t == "b" {
            return Ok(VertexAddress::base());
        }
        let colors: Vec<usize> = t
            .split('.')
            .map(|s| match s.trim().parse::<usize>() {
                Ok(c) if c >= 1 => Ok(c - 1),
                _ => Err(Error::MalformedAddress(format!("bad color {s:?} in {text:?}"))),
            })
            .collect::<Result<_>>()?;
        VertexAddress::from_colors(degree, &colors)
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Distance from the base vertex.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_base(&self) -> bool {
        self.word.is_empty()
    }

    /// Color of the edge towards the parent.
    pub fn last(&self) -> Option<usize> {
        self.word.last().map(|&c| c as usize)
    }

    pub fn parent(&self) -> Result<VertexAddress> {
        if self.word.is_empty() {
            return Err(Error::BaseHasNoParent);
        }
        Ok(VertexAddress {
            word: self.word[..self.word.len() - 1].to_vec(),
        })
    }

    /// The child across the edge of color `c`.
    pub fn child(&self, c: usize) -> Result<VertexAddress> {
        if self.last() == Some(c) {
            return Err(Error::NotAdjacent(
                self.to_string(),
                format!("{self}.{}", c + 1),
            ));
        }
        let mut word = self.word.clone();
        word.push(c as u8);
        Ok(VertexAddress { word })
    }

    /// The neighbor across the edge of color `c` (parent or child).
    pub fn neighbor(&self, c: usize) -> VertexAddress {
        let mut word = self.word.clone();
        if word.last() == Some(&(c as u8)) {
            word.pop();
        } else {
            word.push(c as u8);
        }
        VertexAddress { word }
    }

    /// Reduced product `self * other`: walk the colors of `other` from `self`.
    pub fn mul(&self, other: &VertexAddress) -> VertexAddress {
        let mut word = self.word.clone();
        for &c in &other.word {
            if word.last() == Some(&c) {
                word.pop();
            } else {
                word.push(c);
            }
        }
        VertexAddress { word }
    }

    /// Inverse in the free product: the reversed word.
    pub fn inverse(&self) -> VertexAddress {
        let mut word = self.word.clone();
        word.reverse();
        VertexAddress { word }
    }

    /// The word leading from `self` to `other`.
    pub fn offset_to(&self, other: &VertexAddress) -> VertexAddress {
        self.inverse().mul(other)
    }

    pub fn distance(&self, other: &VertexAddress) -> usize {
        let common = self
            .word
            .iter()
            .zip(&other.word)
            .take_while(|(a, b)| a == b)
            .count();
        self.word.len() + other.word.len() - 2 * common
    }

    /// True when `self` lies in the subtree hanging below `ancestor`
    /// (including `ancestor` itself).
    pub fn descends_from(&self, ancestor: &VertexAddress) -> bool {
        self.word.starts_with(&ancestor.word)
    }

    pub fn is_adjacent(&self, other: &VertexAddress) -> bool {
        self.distance(other) == 1
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("ε");
        }
        for (i, c) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", c + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl FromStr for VertexAddress {
    type Err = Error;

    /// Parses without a degree bound; validate with [`Tree::check`].
    fn from_str(s: &str) -> Result<Self> {
        VertexAddress::parse(s, usize::MAX)
    }
}

/// Color of the edge joining adjacent vertices.
pub fn edge_color(v: &VertexAddress, w: &VertexAddress) -> Result<usize> {
    if v.len() + 1 == w.len() && w.descends_from(v) {
        return Ok(w.last().expect("non-base"));
    }
    if w.len() + 1 == v.len() && v.descends_from(w) {
        return Ok(v.last().expect("non-base"));
    }
    Err(Error::NotAdjacent(v.to_string(), w.to_string()))
}

/// The colored `d`-regular tree, with a cap on enumerated balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tree {
    degree: usize,
    ball_cap: usize,
}

impl Tree {
    pub fn new(degree: usize) -> Result<Tree> {
        Tree::with_cap(degree, DEFAULT_BALL_CAP)
    }

    pub fn with_cap(degree: usize, ball_cap: usize) -> Result<Tree> {
        if !(3..=crate::perm::MAX_DEGREE).contains(&degree) {
            return Err(Error::DegreeOutOfRange(degree));
        }
        Ok(Tree { degree, ball_cap })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Validates colors of an address against the degree.
    pub fn check(&self, v: &VertexAddress) -> Result<()> {
        if let Some(c) = v.word.iter().find(|&&c| c as usize >= self.degree) {
            return Err(Error::MalformedAddress(format!(
                "color {} outside 1..={}",
                c + 1,
                self.degree
            )));
        }
        Ok(())
    }

    /// `|S(b, k)| = d (d-1)^(k-1)` for `k >= 1`.
    pub fn sphere_size(&self, k: usize) -> u128 {
        if k == 0 {
            1
        } else {
            self.degree as u128 * (self.degree as u128 - 1).pow(k as u32 - 1)
        }
    }

    pub fn ball_size(&self, n: usize) -> u128 {
        (0..=n).map(|k| self.sphere_size(k)).sum()
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        let size = self.ball_size(n);
        if size > self.ball_cap as u128 {
            return Err(Error::CapExceeded {
                what: format!("ball of radius {n} with {size} vertices"),
                cap: self.ball_cap as u128,
            });
        }
        Ok(())
    }

    /// All reduced words of length exactly `k`, in lexicographic order.
    pub fn sphere(&self, k: usize) -> Result<Vec<VertexAddress>> {
        self.check_cap(k)?;
        let index = ball_index(self.degree, k);
        Ok(index.words[index.sphere_start(k)..].to_vec())
    }

    /// All vertices within distance `n` of `b`, by distance then lexicographic.
    pub fn ball(&self, n: usize) -> Result<Vec<VertexAddress>> {
        self.check_cap(n)?;
        Ok(ball_index(self.degree, n).words.clone())
    }

    /// The bijection `l_v` from incident edges to colors, as
    /// `(neighbor, color)` pairs sorted by color.
    pub fn local_edge_colors(&self, v: &VertexAddress) -> Result<Vec<(VertexAddress, usize)>> {
        self.check(v)?;
        Ok((0..self.degree).map(|c| (v.neighbor(c), c)).collect())
    }

    /// `B(b, n)` as a complete subtree; `n >= 1`.
    pub fn complete_ball(&self, n: usize) -> Result<CompleteSubtree> {
        if n == 0 {
            return Err(Error::NotComplete(
                "the base vertex is never a leaf; radius must be at least 1".into(),
            ));
        }
        let vertices: BTreeSet<VertexAddress> = self.ball(n)?.into_iter().collect();
        CompleteSubtree::new(*self, vertices)
    }

    /// Checks that a vertex set is prefix-closed and contains `b`.
    pub fn subtree(&self, vertices: impl IntoIterator<Item = VertexAddress>) -> Result<FiniteSubtree> {
        let vertices: BTreeSet<VertexAddress> = vertices.into_iter().collect();
        for v in &vertices {
            self.check(v)?;
            if let Ok(p) = v.parent() {
                if !vertices.contains(&p) {
                    return Err(Error::NotASubtree(format!("{v} present without its parent {p}")));
                }
            }
        }
        if !vertices.contains(&VertexAddress::base()) {
            return Err(Error::NotASubtree("subtree must contain the base vertex".into()));
        }
        Ok(FiniteSubtree { vertices })
    }

    pub fn is_complete(&self, t: &FiniteSubtree) -> bool {
        CompleteSubtree::new(*self, t.vertices.clone()).is_ok()
    }

    /// `v` plus its descendants away from `t`, down to `m` levels below `v`.
    pub fn branch(&self, t: &CompleteSubtree, v: &VertexAddress, m: usize) -> Result<Vec<VertexAddress>> {
        if !t.leaves.contains(v) {
            return Err(Error::NotComplete(format!("{v} is not a leaf")));
        }
        let mut out = vec![v.clone()];
        let mut frontier = vec![v.clone()];
        for _ in 0..m {
            let mut next = Vec::new();
            for x in &frontier {
                for c in 0..self.degree {
                    if x.last() != Some(c) {
                        next.push(x.child(c)?);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }
}

/// A finite prefix-closed vertex set containing `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubtree {
    vertices: BTreeSet<VertexAddress>,
}

impl FiniteSubtree {
    /// The subtree `{b}`.
    pub fn base() -> FiniteSubtree {
        FiniteSubtree {
            vertices: [VertexAddress::base()].into_iter().collect(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexAddress> {
        &self.vertices
    }

    pub fn contains(&self, v: &VertexAddress) -> bool {
        self.vertices.contains(v)
    }

    /// Largest distance from `b`.
    pub fn height(&self) -> usize {
        self.vertices.iter().map(|v| v.len()).max().unwrap_or(0)
    }

    /// Colors of the subtree edges at `x`.
    pub fn edge_colors_at(&self, x: &VertexAddress, degree: usize) -> Vec<usize> {
        if !self.contains(x) {
            return Vec::new();
        }
        (0..degree)
            .filter(|&c| self.contains(&x.neighbor(c)))
            .collect()
    }
}

impl From<CompleteSubtree> for FiniteSubtree {
    fn from(t: CompleteSubtree) -> Self {
        FiniteSubtree {
            vertices: t.vertices,
        }
    }
}

/// A finite subtree containing `b` whose non-leaf vertices have full valency.
/// `b` always counts as a non-leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteSubtree {
    degree: usize,
    vertices: BTreeSet<VertexAddress>,
    leaves: BTreeSet<VertexAddress>,
}

impl CompleteSubtree {
    pub fn new(tree: Tree, vertices: BTreeSet<VertexAddress>) -> Result<CompleteSubtree> {
        let sub = tree.subtree(vertices)?;
        let d = tree.degree();
        let mut leaves = BTreeSet::new();
        for v in &sub.vertices {
            let present = (0..d).filter(|&c| sub.contains(&v.neighbor(c))).count();
            let is_leaf = !v.is_base() && present == 1;
            if is_leaf {
                leaves.insert(v.clone());
            } else if present != d {
                return Err(Error::NotComplete(format!(
                    "non-leaf {v} has valency {present} < {d}"
                )));
            }
        }
        Ok(CompleteSubtree {
            degree: d,
            vertices: sub.vertices,
            leaves,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertices(&self) -> &BTreeSet<VertexAddress> {
        &self.vertices
    }

    pub fn leaves(&self) -> &BTreeSet<VertexAddress> {
        &self.leaves
    }

    pub fn contains(&self, v: &VertexAddress) -> bool {
        self.vertices.contains(v)
    }

    pub fn height(&self) -> usize {
        self.vertices.iter().map(|v| v.len()).max().unwrap_or(0)
    }

    /// Union of two complete subtrees; again complete.
    pub fn union(&self, other: &CompleteSubtree) -> Result<CompleteSubtree> {
        let tree = Tree::new(self.degree)?;
        CompleteSubtree::new(tree, self.vertices.union(&other.vertices).cloned().collect())
    }

    /// Adds all children of `leaf`.
    pub fn expand(&self, leaf: &VertexAddress) -> Result<CompleteSubtree> {
        if !self.leaves.contains(leaf) {
            return Err(Error::NotComplete(format!("{leaf} is not a leaf")));
        }
        let mut vertices = self.vertices.clone();
        for c in 0..self.degree {
            vertices.insert(leaf.neighbor(c));
        }
        CompleteSubtree::new(Tree::new(self.degree)?, vertices)
    }

    /// The unique leaf at or above `v`, for `v` outside the interior.
    pub fn leaf_above(&self, v: &VertexAddress) -> Option<VertexAddress> {
        self.leaves.iter().find(|l| v.descends_from(l)).cloned()
    }

    pub fn is_subtree_of(&self, other: &CompleteSubtree) -> bool {
        self.vertices.is_subset(&other.vertices)
    }
}

/// Precomputed layout of `ball(r)` around an arbitrary center: relative
/// words in breadth-first order with neighbor tables.
///
/// Because words are listed by length and then lexicographically, the
/// layout of a smaller ball is a prefix of the layout of a larger one, so
/// indices agree across radii.
pub(crate) struct BallIndex {
    pub degree: usize,
    pub radius: usize,
    pub words: Vec<VertexAddress>,
    lookup: HashMap<VertexAddress, usize>,
    /// `neighbor[i * d + c]`: index across color `c`, or `NONE` past the boundary.
    neighbor: Vec<u32>,
    sphere_starts: Vec<usize>,
}

pub(crate) const NONE: u32 = u32::MAX;

impl BallIndex {
    fn build(degree: usize, radius: usize) -> BallIndex {
        let mut words = vec![VertexAddress::base()];
        let mut sphere_starts = vec![0];
        let mut start = 0;
        for _ in 0..radius {
            let end = words.len();
            sphere_starts.push(end);
            for i in start..end {
                let w = words[i].clone();
                for c in 0..degree {
                    if w.last() != Some(c) {
                        words.push(w.child(c).expect("reduced"));
                    }
                }
            }
            start = end;
        }
        let lookup: HashMap<VertexAddress, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut neighbor = vec![NONE; words.len() * degree];
        for (i, w) in words.iter().enumerate() {
            for c in 0..degree {
                if let Some(&j) = lookup.get(&w.neighbor(c)) {
                    neighbor[i * degree + c] = j as u32;
                }
            }
        }
        BallIndex {
            degree,
            radius,
            words,
            lookup,
            neighbor,
            sphere_starts,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Number of vertices at distance `< r`, i.e. the first index of sphere `r`.
    pub fn interior_len(&self, r: usize) -> usize {
        if r == 0 {
            0
        } else {
            self.sphere_start(r)
        }
    }

    pub fn sphere_start(&self, k: usize) -> usize {
        if k <= self.radius {
            self.sphere_starts[k]
        } else {
            self.words.len()
        }
    }

    pub fn index_of(&self, w: &VertexAddress) -> Option<usize> {
        self.lookup.get(w).copied()
    }

    #[inline]
    pub fn neighbor(&self, i: usize, c: usize) -> u32 {
        self.neighbor[i * self.degree + c]
    }

    #[inline]
    pub fn depth(&self, i: usize) -> usize {
        self.words[i].len()
    }

    #[inline]
    pub fn last(&self, i: usize) -> Option<usize> {
        self.words[i].last()
    }

    /// Index of the parent of `i > 0`.
    #[inline]
    pub fn parent(&self, i: usize) -> usize {
        let c = self.last(i).expect("non-base");
        self.neighbor(i, c) as usize
    }
}

/// Shared ball layout for `(degree, radius)`.
pub(crate) fn ball_index(degree: usize, radius: usize) -> Arc<BallIndex> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<BallIndex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("ball cache").get(&(degree, radius)) {
        return Arc::clone(hit);
    }
    // built outside the lock; a concurrent duplicate build is harmless
    let built = Arc::new(BallIndex::build(degree, radius));
    let mut guard = cache.lock().expect("ball cache");
    Arc::clone(guard.entry((degree, radius)).or_insert(built))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> VertexAddress {
        VertexAddress::parse(s, 16).unwrap()
    }

    #[test]
    fn sphere_sizes() {
        let t = Tree::new(3).unwrap();
        assert_eq!(t.sphere(2).unwrap().len(), 6);
        assert_eq!(t.sphere(0).unwrap(), vec![VertexAddress::base()]);
        assert_eq!(Tree::new(8).unwrap().sphere(1).unwrap().len(), 8);
        for d in 3..=8 {
            let t = Tree::new(d).unwrap();
            for k in 0..=4 {
                assert_eq!(t.sphere(k).unwrap().len() as u128, t.sphere_size(k));
            }
        }
        let small = Tree::with_cap(3, 10).unwrap();
        assert!(matches!(small.ball(3), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn adjacency() {
        assert_eq!(a("2.3").child(0).unwrap(), a("2.3.1"));
        assert_eq!(edge_color(&a("2.3"), &a("2")).unwrap(), 2);
        assert_eq!(edge_color(&a("2"), &a("2.3")).unwrap(), 2);
        assert!(matches!(a("").parent(), Err(Error::BaseHasNoParent)));
        assert!(matches!(a("2.3").child(2), Err(Error::NotAdjacent(..))));
        assert!(matches!(
            edge_color(&a("1"), &a("2")),
            Err(Error::NotAdjacent(..))
        ));
        let t = Tree::new(3).unwrap();
        let lec = t.local_edge_colors(&a("2")).unwrap();
        assert_eq!(
            lec,
            vec![(a("2.1"), 0), (VertexAddress::base(), 1), (a("2.3"), 2)]
        );
    }

    #[test]
    fn free_product_arithmetic() {
        let v = a("1.2.3");
        assert_eq!(v.mul(&v.inverse()), VertexAddress::base());
        assert_eq!(a("1.2").mul(&a("2.3")), a("1.3"));
        assert_eq!(a("1.2").distance(&a("1.3.1")), 3);
        assert_eq!(a("1.2").offset_to(&a("1.3")), a("2.3"));
        assert_eq!(a("1.2").to_string(), "1.2");
        assert_eq!(VertexAddress::base().to_string(), "ε");
        assert!(VertexAddress::parse("1.1", 3).is_err());
        assert!(VertexAddress::parse("4", 3).is_err());
    }

    #[test]
    fn complete_subtrees() {
        let t = Tree::new(3).unwrap();
        let b1 = t.complete_ball(1).unwrap();
        assert_eq!(b1.vertices().len(), 4);
        assert_eq!(b1.leaves().len(), 3);
        let small = t.subtree([a(""), a("1")]).unwrap();
        assert!(!t.is_complete(&small));
        assert!(t.is_complete(&FiniteSubtree::from(b1.clone())));
        let br = t.branch(&b1, &a("1"), 1).unwrap();
        assert_eq!(br, vec![a("1"), a("1.2"), a("1.3")]);
        assert!(t.complete_ball(0).is_err());
        let b2 = t.complete_ball(2).unwrap();
        assert_eq!(b2.leaves().iter().cloned().collect::<Vec<_>>(), t.sphere(2).unwrap());
        let grown = b1.expand(&a("2")).unwrap();
        assert_eq!(grown.leaves().len(), 4);
        assert_eq!(grown.leaf_above(&a("2.3.1")), Some(a("2.3")));
    }

    #[test]
    fn branches_partition_the_annulus() {
        let t = Tree::new(4).unwrap();
        for n in 1..=2 {
            let cb = t.complete_ball(n).unwrap();
            let m = 2;
            let mut seen = BTreeSet::new();
            for v in cb.leaves() {
                for w in t.branch(&cb, v, m).unwrap() {
                    assert!(seen.insert(w));
                }
            }
            let expected: BTreeSet<_> = t
                .ball(n + m)
                .unwrap()
                .into_iter()
                .filter(|v| v.len() >= n)
                .collect();
            assert_eq!(seen, expected);
        }
    }

    #[test]
    fn ball_index_layout_is_prefix_stable() {
        let small = ball_index(4, 2);
        let big = ball_index(4, 3);
        assert_eq!(&big.words[..small.len()], &small.words[..]);
        assert_eq!(small.interior_len(2), 5);
        assert_eq!(big.parent(7), big.index_of(&big.words[7].parent().unwrap()).unwrap());
    }
}
