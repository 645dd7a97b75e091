//! Truncated tree automorphisms stored by their local permutations.
//!
//! A [`LocalActionMap`] is an isomorphism `B(v, r) -> B(w, r)` given by the
//! image `w` of the root and the local permutation `sigma(g, x)` at every
//! vertex `x` with `d(v, x) < r`. The vertex map is derived: the neighbor of
//! `x` across color `c` goes to the neighbor of `g(x)` across color
//! `sigma(g, x)(c)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::tree::{ball_index, BallIndex, VertexAddress, DEFAULT_BALL_CAP};

#[derive(Clone)]
pub struct LocalActionMap {
    degree: usize,
    domain_root: VertexAddress,
    root_image: VertexAddress,
    radius: usize,
    /// One entry per interior vertex, indexed by relative ball position.
    sigma: Vec<Perm>,
    ball: Arc<BallIndex>,
    image_index: OnceLock<Arc<Vec<u32>>>,
}

impl PartialEq for LocalActionMap {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.domain_root == other.domain_root
            && self.root_image == other.root_image
            && self.radius == other.radius
            && self.sigma == other.sigma
    }
}

impl Eq for LocalActionMap {}

impl fmt::Debug for LocalActionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalActionMap(B({}, {}) -> B({}, {}); ",
            self.domain_root, self.radius, self.root_image, self.radius
        )?;
        for (i, s) in self.sigma.iter().enumerate() {
            if !s.is_identity() {
                write!(f, "{}:{} ", self.domain_root.mul(&self.ball.words[i]), s)?;
            }
        }
        f.write_str(")")
    }
}

fn checked_ball(degree: usize, radius: usize) -> Result<Arc<BallIndex>> {
    if radius == 0 {
        return Err(Error::RadiusExhausted("radius must be at least 1".into()));
    }
    if !(3..=crate::perm::MAX_DEGREE).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let size: u128 = (0..=radius)
        .map(|k| {
            if k == 0 {
                1
            } else {
                degree as u128 * (degree as u128 - 1).pow(k as u32 - 1)
            }
        })
        .sum();
    if size > DEFAULT_BALL_CAP as u128 {
        return Err(Error::CapExceeded {
            what: format!("ball of radius {radius} with {size} vertices"),
            cap: DEFAULT_BALL_CAP as u128,
        });
    }
    Ok(ball_index(degree, radius))
}

impl LocalActionMap {
    /// Builds a map breadth-first. `choose` receives the absolute vertex and,
    /// away from the root, the constraint `(c, t)`: the local permutation
    /// must send the color `c` of the edge towards the root to `t`.
    pub fn build(
        degree: usize,
        domain_root: VertexAddress,
        root_image: VertexAddress,
        radius: usize,
        mut choose: impl FnMut(&VertexAddress, Option<(usize, usize)>) -> Result<Perm>,
    ) -> Result<LocalActionMap> {
        let ball = checked_ball(degree, radius)?;
        let interior = ball.interior_len(radius);
        let mut sigma: Vec<Perm> = Vec::with_capacity(interior);
        for i in 0..interior {
            let x = domain_root.mul(&ball.words[i]);
            let constraint = (i > 0).then(|| {
                let c = ball.last(i).expect("non-root");
                (c, sigma[ball.parent(i)].apply(c))
            });
            let s = choose(&x, constraint)?;
            if s.degree() != degree {
                return Err(Error::DegreeMismatch(degree, s.degree()));
            }
            if let Some((c, t)) = constraint {
                if s.apply(c) != t {
                    return Err(Error::IncompatibleLocalActions {
                        vertex: x.to_string(),
                        color: c + 1,
                    });
                }
            }
            sigma.push(s);
        }
        Ok(LocalActionMap {
            degree,
            domain_root,
            root_image,
            radius,
            sigma,
            ball,
            image_index: OnceLock::new(),
        })
    }

    /// Validates a prescribed family of local permutations, keyed by
    /// absolute vertex, covering `B(domain_root, radius - 1)`.
    pub fn from_local_actions(
        degree: usize,
        domain_root: VertexAddress,
        root_image: VertexAddress,
        radius: usize,
        sigma: &BTreeMap<VertexAddress, Perm>,
    ) -> Result<LocalActionMap> {
        checked_ball(degree, radius)?;
        for x in sigma.keys() {
            let rel = domain_root.offset_to(x);
            if rel.len() >= radius {
                return Err(Error::OutsideDomain(x.to_string()));
            }
        }
        LocalActionMap::build(degree, domain_root, root_image, radius, |x, _| {
            sigma
                .get(x)
                .copied()
                .ok_or_else(|| Error::MissingSigma(x.to_string()))
        })
    }

    pub fn identity(degree: usize, root: VertexAddress, radius: usize) -> Result<LocalActionMap> {
        let id = Perm::identity(degree)?;
        LocalActionMap::build(degree, root.clone(), root, radius, |_, _| Ok(id))
    }

    /// The color-preserving automorphism (an element of `U({id})`) taking
    /// `b` to `target`, truncated to `B(b, radius)`.
    pub fn translation(degree: usize, target: VertexAddress, radius: usize) -> Result<LocalActionMap> {
        let id = Perm::identity(degree)?;
        LocalActionMap::build(degree, VertexAddress::base(), target, radius, |_, _| Ok(id))
    }

    /// Builds a map with local permutations from `fill`, taking the
    /// lexicographically least admissible element at every vertex where
    /// `prescribe` returns `None`.
    pub fn extend_lex_least(
        domain_root: VertexAddress,
        root_image: VertexAddress,
        radius: usize,
        fill: &PermGroup,
        mut prescribe: impl FnMut(&VertexAddress) -> Option<Perm>,
    ) -> Result<LocalActionMap> {
        LocalActionMap::build(fill.degree(), domain_root, root_image, radius, |x, con| {
            if let Some(s) = prescribe(x) {
                return Ok(s);
            }
            least_admissible(fill, con).ok_or_else(|| {
                Error::IncompatibleLocalActions {
                    vertex: x.to_string(),
                    color: con.map(|(c, _)| c + 1).unwrap_or(0),
                }
            })
        })
    }

    /// Recovers the local permutations from an explicit vertex map on
    /// `B(domain_root, radius)`, keyed by absolute addresses.
    pub fn from_vertex_map(
        degree: usize,
        domain_root: VertexAddress,
        radius: usize,
        map: &HashMap<VertexAddress, VertexAddress>,
    ) -> Result<LocalActionMap> {
        let root_image = map
            .get(&domain_root)
            .cloned()
            .ok_or_else(|| Error::OutsideDomain(domain_root.to_string()))?;
        LocalActionMap::build(degree, domain_root, root_image, radius, |x, _| {
            let gx = map.get(x).ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
            let mut images = Vec::with_capacity(degree);
            for c in 0..degree {
                let y = x.neighbor(c);
                let gy = map.get(&y).ok_or_else(|| Error::OutsideDomain(y.to_string()))?;
                images.push(crate::tree::edge_color(gx, gy)?);
            }
            Perm::from_images(&images)
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn domain_root(&self) -> &VertexAddress {
        &self.domain_root
    }

    pub fn root_image(&self) -> &VertexAddress {
        &self.root_image
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn fixes_root(&self) -> bool {
        self.domain_root == self.root_image
    }

    /// Interior vertices (distance `< radius` from the root), breadth-first.
    pub fn interior(&self) -> impl Iterator<Item = VertexAddress> + '_ {
        self.ball.words[..self.sigma.len()]
            .iter()
            .map(|w| self.domain_root.mul(w))
    }

    /// `(vertex, sigma)` pairs over the interior.
    pub fn sigma_entries(&self) -> impl Iterator<Item = (VertexAddress, Perm)> + '_ {
        self.interior().zip(self.sigma.iter().copied())
    }

    /// Local permutations in breadth-first order of relative position.
    pub fn sigma_slice(&self) -> &[Perm] {
        &self.sigma
    }

    /// Relative index of an interior vertex.
    fn interior_index(&self, x: &VertexAddress) -> Result<usize> {
        let rel = self.domain_root.offset_to(x);
        if rel.len() >= self.radius {
            return Err(Error::OutsideDomain(x.to_string()));
        }
        Ok(self.ball.index_of(&rel).expect("interior word present"))
    }

    /// The stored local permutation at an interior vertex.
    pub fn sigma_at(&self, x: &VertexAddress) -> Result<Perm> {
        Ok(self.sigma[self.interior_index(x)?])
    }

    /// `sigma(g, x) = l_{g x} . g . l_x^{-1}`, recomputed from the vertex map.
    pub fn sigma_of(&self, x: &VertexAddress) -> Result<Perm> {
        let i = self.interior_index(x)?;
        let imap = self.image_index();
        let gi = imap[i] as usize;
        let gx = &self.ball.words[gi];
        let mut images = Vec::with_capacity(self.degree);
        for c in 0..self.degree {
            let j = self.ball.neighbor(i, c) as usize;
            let gy = &self.ball.words[imap[j] as usize];
            images.push(crate::tree::edge_color(gx, gy)?);
        }
        Perm::from_images(&images)
    }

    /// Relative image positions for every vertex of the domain ball.
    pub(crate) fn image_index(&self) -> Arc<Vec<u32>> {
        Arc::clone(self.image_index.get_or_init(|| {
            let n = self.ball.len();
            let mut imap = vec![0u32; n];
            for i in 1..n {
                let p = self.ball.parent(i);
                let c = self.ball.last(i).expect("non-root");
                let t = self.sigma[p].apply(c);
                imap[i] = self.ball.neighbor(imap[p] as usize, t);
                debug_assert_ne!(imap[i], crate::tree::NONE);
            }
            Arc::new(imap)
        }))
    }

    /// Image of a vertex of the domain ball.
    pub fn image(&self, x: &VertexAddress) -> Result<VertexAddress> {
        let rel = self.domain_root.offset_to(x);
        let i = self
            .ball
            .index_of(&rel)
            .ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
        let j = self.image_index()[i] as usize;
        Ok(self.root_image.mul(&self.ball.words[j]))
    }

    /// The full vertex map on the domain ball.
    pub fn vertex_map(&self) -> HashMap<VertexAddress, VertexAddress> {
        let imap = self.image_index();
        self.ball
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                (
                    self.domain_root.mul(w),
                    self.root_image.mul(&self.ball.words[imap[i] as usize]),
                )
            })
            .collect()
    }

    /// `self . other` (apply `other` first). The result lives on
    /// `B(other.domain_root, r)` with
    /// `r = min(r_other, r_self - d(self.domain_root, other.root_image))`.
    pub fn compose(&self, other: &LocalActionMap) -> Result<LocalActionMap> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let offset = self.domain_root.offset_to(&other.root_image);
        let gap = offset.len();
        let r = other.radius.min(self.radius.saturating_sub(gap));
        if r < 1 || self.radius <= gap {
            return Err(Error::RadiusExhausted(format!(
                "composition radius {} - {} leaves nothing",
                self.radius, gap
            )));
        }
        let imap = other.image_index();
        let interior = other.ball.interior_len(r);
        let mut sigma = Vec::with_capacity(interior);
        for i in 0..interior {
            let j = imap[i] as usize;
            let k = if gap == 0 {
                j
            } else {
                let rel = offset.mul(&other.ball.words[j]);
                self.ball.index_of(&rel).expect("inside outer ball")
            };
            sigma.push(self.sigma[k].mul(&other.sigma[i]));
        }
        let root_image = self.image(&other.root_image)?;
        Ok(LocalActionMap {
            degree: self.degree,
            domain_root: other.domain_root.clone(),
            root_image,
            radius: r,
            sigma,
            ball: checked_ball(self.degree, r)?,
            image_index: OnceLock::new(),
        })
    }

    /// The inverse map `B(root_image, r) -> B(domain_root, r)`.
    pub fn invert(&self) -> LocalActionMap {
        let imap = self.image_index();
        let mut sigma = vec![self.sigma[0]; self.sigma.len()];
        for (i, s) in self.sigma.iter().enumerate() {
            sigma[imap[i] as usize] = s.inverse();
        }
        LocalActionMap {
            degree: self.degree,
            domain_root: self.root_image.clone(),
            root_image: self.domain_root.clone(),
            radius: self.radius,
            sigma,
            ball: Arc::clone(&self.ball),
            image_index: OnceLock::new(),
        }
    }

    /// Restriction to a smaller ball `B(center, r)` inside the domain.
    pub fn restrict(&self, center: &VertexAddress, r: usize) -> Result<LocalActionMap> {
        let offset = self.domain_root.offset_to(center);
        if r == 0 || offset.len() + r > self.radius {
            return Err(Error::RadiusExhausted(format!(
                "B({center}, {r}) does not fit in B({}, {})",
                self.domain_root, self.radius
            )));
        }
        let ball = checked_ball(self.degree, r)?;
        let interior = ball.interior_len(r);
        let sigma = (0..interior)
            .map(|i| {
                let rel = offset.mul(&ball.words[i]);
                self.sigma[self.ball.index_of(&rel).expect("inside")]
            })
            .collect();
        Ok(LocalActionMap {
            degree: self.degree,
            domain_root: center.clone(),
            root_image: self.image(center)?,
            radius: r,
            sigma,
            ball,
            image_index: OnceLock::new(),
        })
    }

    /// Same map with a smaller radius around the same root.
    pub fn truncate(&self, r: usize) -> Result<LocalActionMap> {
        self.restrict(&self.domain_root.clone(), r)
    }

    /// True when the map fixes `B(domain_root, m)` pointwise.
    pub fn fixes_ball(&self, m: usize) -> bool {
        if !self.fixes_root() || m > self.radius {
            return false;
        }
        let imap = self.image_index();
        let end = self.ball.sphere_start(m + 1).min(self.ball.len());
        (0..end).all(|i| imap[i] as usize == i)
    }

    /// All interior local permutations lie in `f`.
    pub fn is_in_u(&self, f: &PermGroup) -> bool {
        self.sigma.iter().all(|s| f.contains(s))
    }

    /// Interior vertices whose local permutation lies outside `f`.
    pub fn singularities(&self, f: &PermGroup) -> Vec<VertexAddress> {
        self.sigma_entries()
            .filter(|(_, s)| !f.contains(s))
            .map(|(x, _)| x)
            .collect()
    }

    /// Smallest `m` such that every singularity lies within distance
    /// `m - 1` of the root (0 when there are none).
    pub fn singularity_radius(&self, f: &PermGroup) -> usize {
        self.sigma
            .iter()
            .enumerate()
            .filter(|(_, s)| !f.contains(s))
            .map(|(i, _)| self.ball.depth(i) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Membership in `G(F, F')` at truncation: all local permutations in
    /// `F'`. Finiteness of the singular set is automatic here.
    pub fn is_in_g(&self, f: &PermGroup, f_prime: &PermGroup) -> Result<bool> {
        check_tower(f, f_prime)?;
        Ok(self.is_in_u(f_prime))
    }

    pub fn to_json(&self) -> LocalActionJson {
        LocalActionJson {
            degree: self.degree,
            domain_root: self.domain_root.to_string(),
            root_image: self.root_image.to_string(),
            radius: self.radius,
            sigma: self
                .sigma_entries()
                .map(|(x, s)| (x.to_string(), s.to_cycle_string()))
                .collect(),
        }
    }

    pub fn from_json(json: &LocalActionJson) -> Result<LocalActionMap> {
        let d = json.degree;
        let mut sigma = BTreeMap::new();
        for (k, v) in &json.sigma {
            sigma.insert(VertexAddress::parse(k, d)?, Perm::parse(v, d)?);
        }
        LocalActionMap::from_local_actions(
            d,
            VertexAddress::parse(&json.domain_root, d)?,
            VertexAddress::parse(&json.root_image, d)?,
            json.radius,
            &sigma,
        )
    }
}

/// Wire form: `{degree, domain_root, root_image, radius, sigma: {address: cycles}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalActionJson {
    pub degree: usize,
    #[serde(default = "base_string")]
    pub domain_root: String,
    pub root_image: String,
    pub radius: usize,
    pub sigma: BTreeMap<String, String>,
}

fn base_string() -> String {
    "ε".to_string()
}

/// Least element of `group` satisfying an optional `c -> t` constraint.
pub(crate) fn least_admissible(group: &PermGroup, con: Option<(usize, usize)>) -> Option<Perm> {
    match con {
        None => Some(group.identity()),
        Some((c, t)) => group.elements().iter().find(|s| s.apply(c) == t).copied(),
    }
}

/// Validates `F <= F' <= F^`.
pub fn check_tower(f: &PermGroup, f_prime: &PermGroup) -> Result<()> {
    if !f.is_subgroup_of(f_prime) {
        return Err(Error::TowerViolation("F is not contained in F'".into()));
    }
    let orbits = f.orbits();
    if let Some(g) = f_prime.generators().iter().find(|g| !orbits.preserves(g)) {
        return Err(Error::TowerViolation(format!(
            "F' element {g} does not preserve the F-orbits"
        )));
    }
    Ok(())
}
