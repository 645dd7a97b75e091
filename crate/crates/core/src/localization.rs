//! Finite-depth mechanics of commensurators and localization: Γ-sets,
//! the conjugation cocycle, conjugates of truncated fixators, the
//! obstruction behind the localization theorem, and commensuration indices.
//!
//! Every verdict holds on an explicit ball and is reported with that radius.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::thm45_hypotheses_with_sylow;
use crate::error::{Error, Result};
use crate::group::{prime_divisors, CosetPartition, PermGroup};
use crate::local_action::{least_admissible, LocalActionJson, LocalActionMap};
use crate::perm::Perm;
use crate::tree::{ball_index, Tree, VertexAddress};
use crate::universal::{TruncatedGroupSpec, DEFAULT_ENUM_CAP};

/// A partition of the vertices of `B(b, depth)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    degree: usize,
    depth: usize,
    blocks: Vec<Vec<VertexAddress>>,
    block_of: HashMap<VertexAddress, usize>,
}

impl VertexPartition {
    /// Validates that `blocks` are disjoint and cover `B(b, depth)`.
    pub fn new(degree: usize, depth: usize, blocks: Vec<Vec<VertexAddress>>) -> Result<Self> {
        let ball = Tree::new(degree)?.ball(depth)?;
        let mut block_of = HashMap::with_capacity(ball.len());
        for (k, block) in blocks.iter().enumerate() {
            for v in block {
                if v.len() > depth {
                    return Err(Error::OutsideDomain(v.to_string()));
                }
                if block_of.insert(v.clone(), k).is_some() {
                    return Err(Error::PreconditionFailed(format!("{v} lies in two blocks")));
                }
            }
        }
        if let Some(v) = ball.iter().find(|v| !block_of.contains_key(*v)) {
            return Err(Error::PreconditionFailed(format!("{v} is not covered")));
        }
        Ok(VertexPartition {
            degree,
            depth,
            blocks,
            block_of,
        })
    }

    pub fn singletons(degree: usize, depth: usize) -> Result<Self> {
        let ball = Tree::new(degree)?.ball(depth)?;
        VertexPartition::new(degree, depth, ball.into_iter().map(|v| vec![v]).collect())
    }

    pub fn single_block(degree: usize, depth: usize) -> Result<Self> {
        let ball = Tree::new(degree)?.ball(depth)?;
        VertexPartition::new(degree, depth, vec![ball])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn blocks(&self) -> &[Vec<VertexAddress>] {
        &self.blocks
    }

    pub fn block_of(&self, v: &VertexAddress) -> Option<usize> {
        self.block_of.get(v).copied()
    }

    /// The same partition cut down to `B(b, depth)`.
    pub fn restrict(&self, depth: usize) -> Result<Self> {
        if depth > self.depth {
            return Err(Error::RadiusExhausted(format!(
                "partition has depth {}, asked for {depth}",
                self.depth
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|v| v.len() <= depth).cloned().collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        VertexPartition::new(self.degree, depth, blocks)
    }
}

/// Orbits of a truncated fixator on the vertices of its ball.
pub fn orbit_partition_on_ball(l: &TruncatedGroupSpec) -> Result<VertexPartition> {
    let elements = l.enumerate(DEFAULT_ENUM_CAP)?;
    let d = l.group().degree();
    let index = ball_index(d, l.depth());
    let n = index.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in &elements {
        let imap = g.image_index();
        for (i, &j) in imap.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<VertexAddress>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let k = *slot.entry(root).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[k].push(index.words[i].clone());
    }
    VertexPartition::new(d, l.depth(), blocks)
}

/// Do the local permutations of `g` on each block all lie in one coset of
/// `cp` (inside its ambient group)?
pub fn gamma_membership(g: &LocalActionMap, part: &VertexPartition, cp: &CosetPartition) -> Result<bool> {
    for block in part.blocks() {
        let mut seen = None;
        for v in block {
            let s = g.sigma_at(v)?;
            match (cp.coset_of(&s), seen) {
                (None, _) => return Ok(false),
                (Some(k), None) => seen = Some(k),
                (Some(k), Some(j)) if k != j => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

fn exhausted(e: Error) -> Error {
    match e {
        Error::OutsideDomain(v) => Error::RadiusExhausted(format!("{v} is outside a composed ball")),
        e => e,
    }
}

/// Compares `sigma(g s g^-1, v)` with
/// `sigma(g, s g^-1 v) sigma(s, g^-1 v) sigma(g^-1, v)`.
pub fn cocycle_identity_check(g: &LocalActionMap, s: &LocalActionMap, v: &VertexAddress) -> Result<bool> {
    let gi = g.invert();
    let conj = g.compose(&s.compose(&gi)?)?;
    let lhs = conj.sigma_of(v).map_err(exhausted)?;
    let u = gi.image(v).map_err(exhausted)?;
    let su = s.image(&u).map_err(exhausted)?;
    let rhs = g
        .sigma_of(&su)
        .map_err(exhausted)?
        .mul(&s.sigma_of(&u).map_err(exhausted)?)
        .mul(&gi.sigma_of(v).map_err(exhausted)?);
    Ok(lhs == rhs)
}

/// `g` fixing `b`, cut to radius `n`, with what the conjugation formula needs.
struct Conjugator {
    sigma: Vec<Perm>,
    sigma_inv: Vec<Perm>,
    inv_image: Vec<u32>,
    interior: usize,
}

impl Conjugator {
    fn new(g: &LocalActionMap, n: usize) -> Result<Self> {
        if !g.domain_root().is_base() || !g.fixes_root() {
            return Err(Error::PreconditionFailed("g must fix the base vertex".into()));
        }
        let g = g.truncate(n)?;
        let inv = g.invert();
        let sigma = g.sigma_slice().to_vec();
        Ok(Conjugator {
            sigma_inv: sigma.iter().map(Perm::inverse).collect(),
            sigma,
            inv_image: inv.image_index().to_vec(),
            interior: ball_index(g.degree(), n).interior_len(n),
        })
    }

    /// First interior index where `g s g^-1` has a local permutation outside `fp`.
    fn offender(&self, s: &LocalActionMap, fp: &PermGroup) -> Option<(usize, Perm)> {
        let s_img = s.image_index();
        let s_sigma = s.sigma_slice();
        (0..self.interior).find_map(|i| {
            let u = self.inv_image[i] as usize;
            let x = self.sigma[s_img[u] as usize]
                .mul(&s_sigma[u])
                .mul(&self.sigma_inv[u]);
            (!fp.contains(&x)).then_some((i, x))
        })
    }
}

/// A fixator element whose conjugate leaves `U(Fp)`, with where it does so.
#[derive(Debug, Clone)]
pub struct ConjugationWitness {
    pub s: LocalActionMap,
    pub vertex: VertexAddress,
    pub sigma: Perm,
    /// Radius of the ball on which the conjugate was checked.
    pub radius: usize,
}

/// The lexicographically first `s` in `U(Fp)_{B(b,m)}`, truncated to
/// `B(b, n)`, with `g s g^-1` not in `U(Fp)` on `B(b, n)`.
pub fn containment_witness(
    g: &LocalActionMap,
    fp: &PermGroup,
    m: usize,
    n: usize,
) -> Result<Option<ConjugationWitness>> {
    if m >= n || n > g.radius() {
        return Err(Error::RadiusExhausted(format!(
            "need m < n <= radius, got m={m}, n={n}, radius={}",
            g.radius()
        )));
    }
    let conj = Conjugator::new(g, n)?;
    let candidates = TruncatedGroupSpec::ball_fixator(fp.clone(), m, n)?.enumerate(DEFAULT_ENUM_CAP)?;
    let index = ball_index(g.degree(), n);
    Ok(candidates
        .into_par_iter()
        .filter_map(|s| conj.offender(&s, fp).map(|(i, x)| (s, i, x)))
        .find_first(|_| true)
        .map(|(s, i, x)| ConjugationWitness {
            s,
            vertex: index.words[i].clone(),
            sigma: x,
            radius: n,
        }))
}

/// Does `g U(Fp)_{B(b,m)} g^-1` lie in `U(Fp)`, verified on `B(b, n)`?
pub fn conjugate_fixator_containment(g: &LocalActionMap, fp: &PermGroup, m: usize, n: usize) -> Result<bool> {
    Ok(containment_witness(g, fp, m, n)?.is_none())
}

/// `h` agrees with `g` on `B(b, n)` and has lexicographically least
/// local permutations from `fp` beyond; returns `(h, h^-1 g)`.
pub fn h_reduction(g: &LocalActionMap, fp: &PermGroup, n: usize) -> Result<(LocalActionMap, LocalActionMap)> {
    if !g.domain_root().is_base() || !g.fixes_root() {
        return Err(Error::PreconditionFailed("g must fix the base vertex".into()));
    }
    let h = LocalActionMap::build(
        g.degree(),
        VertexAddress::base(),
        VertexAddress::base(),
        g.radius(),
        |x, con| {
            if x.len() < n {
                return g.sigma_at(x);
            }
            least_admissible(fp, con).ok_or_else(|| {
                Error::PreconditionFailed(format!(
                    "F(p) cannot continue h at {x}: orbit equality fails"
                ))
            })
        },
    )?;
    let k = h.invert().compose(g)?;
    Ok((h, k))
}

#[derive(Debug, Clone)]
pub struct ObstructionWitness {
    pub h: LocalActionMap,
    /// `h^-1 g`, fixing `B(b, n)`.
    pub reduced: LocalActionMap,
    /// Where `h^-1 g` has a local permutation outside `F(p)`.
    pub singular_vertex: VertexAddress,
    pub conjugation: ConjugationWitness,
}

/// Carries out the obstruction argument of the localization theorem at
/// finite depth: reduce `g` to `h^-1 g` fixing `B(b, n)`, then find `s` in
/// `U(Fp)_{B(b,n)}` whose conjugate by `h^-1 g` leaves `U(Fp)` on
/// `B(b, n+1)`.
pub fn thm45_obstruction_witness(
    f: &PermGroup,
    f_prime: &PermGroup,
    fp: &PermGroup,
    n: usize,
    g: &LocalActionMap,
) -> Result<ObstructionWitness> {
    let p = match prime_divisors(fp.order()).as_slice() {
        [p] => *p,
        _ => {
            return Err(Error::PreconditionFailed(
                "F(p) must be a non-trivial p-group".into(),
            ))
        }
    };
    let hyp = thm45_hypotheses_with_sylow(f, f_prime, fp, p)?;
    if !hyp.holds {
        return Err(Error::PreconditionFailed(format!("hypotheses fail: {}", hyp.clause)));
    }
    if n == 0 || g.radius() <= n {
        return Err(Error::RadiusExhausted(format!(
            "need radius > n = {n}, got {}",
            g.radius()
        )));
    }
    if !g.is_in_u(f_prime) {
        return Err(Error::PreconditionFailed("g has local permutations outside F'".into()));
    }
    let (h, k) = h_reduction(g, fp, n)?;
    let singular_vertex = k
        .sigma_entries()
        .find(|(x, s)| x.len() == n && !fp.contains(s))
        .map(|(x, _)| x)
        .ok_or_else(|| {
            Error::PreconditionFailed(format!("g has no local permutation outside F(p) on S(b, {n})"))
        })?;
    let conjugation = containment_witness(&k, fp, n, n + 1)?.ok_or_else(|| {
        Error::NoObstruction(format!("no s in U(F(p))_B(b,{n}) moves h^-1 g out of U(F(p))"))
    })?;
    Ok(ObstructionWitness {
        h,
        reduced: k,
        singular_vertex,
        conjugation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub m: usize,
    pub n: usize,
    /// `|U(Fp)_{B(b,m)}|` restricted to `B(b, n)`.
    pub order: u64,
    /// Elements `s` with `g^-1 s g` back in the fixator.
    pub intersection: u64,
    /// `order / intersection` when the quotient is exact.
    pub index: Option<u64>,
    /// Same for `g^-1`.
    pub symmetric_intersection: u64,
    pub symmetric_index: Option<u64>,
    /// Radius on which conjugates were compared.
    pub radius_of_validity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommensurationReport {
    pub element: LocalActionJson,
    pub entries: Vec<IndexEntry>,
}

/// Is `c` (a truncated conjugate) in `U(fp)_{B(b,m)}` on the part of its
/// ball around `b`? Returns the radius used.
fn conjugate_in_fixator(c: &LocalActionMap, fp: &PermGroup, m: usize) -> Result<Option<usize>> {
    let b = VertexAddress::base();
    let gap = c.domain_root().distance(&b);
    if gap >= c.radius() {
        return Err(Error::RadiusExhausted("conjugate does not reach b".into()));
    }
    let r = c.radius() - gap;
    let local = c.restrict(&b, r)?;
    Ok((local.fixes_root() && m <= r && local.fixes_ball(m) && local.is_in_u(fp)).then_some(r))
}

fn count_returning(
    y: &LocalActionMap,
    elements: &[LocalActionMap],
    fp: &PermGroup,
    m: usize,
) -> Result<(u64, usize)> {
    let yi = y.invert();
    let target = y.root_image().clone();
    let results: Vec<Result<Option<usize>>> = elements
        .par_iter()
        .map(|s| {
            if s.image(&target)? != target {
                return Ok(None);
            }
            let c = yi.compose(&s.compose(y)?)?;
            conjugate_in_fixator(&c, fp, m)
        })
        .collect();
    let mut count = 0;
    let mut radius = usize::MAX;
    for r in results {
        if let Some(r) = r? {
            count += 1;
            radius = radius.min(r);
        }
    }
    Ok((count, radius))
}

/// Indices `[S_m : S_m ∩ g S_m g^-1]` and `[g S_m g^-1 : S_m ∩ g S_m g^-1]`
/// with `S_m = U(Fp)_{B(b,m)}`, computed on `B(b, n)` for each `(m, n)`.
///
/// `g` must be defined on a ball around `b`. An element `s` counts towards
/// the intersection when it fixes `g(b)` and `g^-1 s g` agrees with an
/// element of `S_m` on the largest ball around `b` where the composite is
/// defined.
pub fn commensuration_indices(
    g: &LocalActionMap,
    fp: &PermGroup,
    depths: &[(usize, usize)],
) -> Result<CommensurationReport> {
    if !g.domain_root().is_base() {
        return Err(Error::PreconditionFailed("g must be defined around b".into()));
    }
    let gi = g.invert();
    let mut entries = Vec::new();
    for &(m, n) in depths {
        let elements = TruncatedGroupSpec::ball_fixator(fp.clone(), m, n)?.enumerate(DEFAULT_ENUM_CAP)?;
        let order = elements.len() as u64;
        let (fwd, r1) = count_returning(g, &elements, fp, m)?;
        let (bwd, r2) = count_returning(&gi, &elements, fp, m)?;
        let exact = |c: u64| (c > 0 && order % c == 0).then(|| order / c);
        entries.push(IndexEntry {
            m,
            n,
            order,
            intersection: fwd,
            index: exact(fwd),
            symmetric_intersection: bwd,
            symmetric_index: exact(bwd),
            radius_of_validity: r1.min(r2),
        });
    }
    Ok(CommensurationReport {
        element: g.to_json(),
        entries,
    })
}

/// Every singular local permutation of `g` preserves the `F`-orbits.
pub fn singularity_orbit_invariant(g: &LocalActionMap, f: &PermGroup) -> bool {
    let orbits = f.orbits();
    g.sigma_slice()
        .iter()
        .filter(|s| !f.contains(s))
        .all(|s| orbits.preserves(s))
}

/// A random element of `G(Fp, F')_b` on `B(b, radius)`: local permutations
/// from `F'` at distance `< singular_radius`, from `Fp` beyond.
pub fn random_g_element<R: Rng + ?Sized>(
    fp: &PermGroup,
    f_prime: &PermGroup,
    singular_radius: usize,
    radius: usize,
    rng: &mut R,
) -> Result<LocalActionMap> {
    let b = VertexAddress::base();
    LocalActionMap::build(fp.degree(), b.clone(), b, radius, |x, con| {
        let pool = if x.len() < singular_radius { f_prime } else { fp };
        let cands: Vec<&Perm> = pool
            .elements()
            .iter()
            .filter(|s| con.is_none_or(|(c, t)| s.apply(c) == t))
            .collect();
        cands.choose(rng).map(|s| **s).ok_or_else(|| {
            Error::PreconditionFailed(format!("no admissible local permutation at {x}"))
        })
    })
}

/// A random `g` fixing `b` on `B(b, depth + 1)` whose local permutations on
/// each block of `part` come from one randomly chosen coset of `cp`.
/// Returns `None` when a block's coset admits no compatible choice.
pub fn random_gamma_member<R: Rng + ?Sized>(
    part: &VertexPartition,
    cp: &CosetPartition,
    rng: &mut R,
) -> Result<Option<LocalActionMap>> {
    let mut coset_elems: Vec<Vec<Perm>> = vec![Vec::new(); cp.len()];
    for s in cp.ambient().elements() {
        coset_elems[cp.coset_of(s).expect("ambient element")].push(*s);
    }
    let choice: Vec<usize> = (0..part.blocks().len())
        .map(|_| rng.gen_range(0..cp.len()))
        .collect();
    let b = VertexAddress::base();
    let built = LocalActionMap::build(part.degree(), b.clone(), b, part.depth() + 1, |x, con| {
        let k = choice[part.block_of(x).expect("partition covers the interior")];
        let cands: Vec<&Perm> = coset_elems[k]
            .iter()
            .filter(|s| con.is_none_or(|(c, t)| s.apply(c) == t))
            .collect();
        cands
            .choose(rng)
            .map(|s| **s)
            .ok_or_else(|| Error::PreconditionFailed(format!("coset has no admissible element at {x}")))
    });
    match built {
        Ok(g) if g.fixes_root() => Ok(Some(g)),
        Ok(_) | Err(Error::PreconditionFailed(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
