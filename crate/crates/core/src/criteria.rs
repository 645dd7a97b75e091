//! Decidable hypotheses of the local Sylow and localization results, as
//! predicates over `(F, F', p)`.
//!
//! Each checker returns a [`CriterionReport`]: a verdict, the clause that
//! decided it, per-point evidence and a label naming the conclusion the
//! hypotheses give. The infinite-group conclusions themselves are never
//! asserted here.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{is_prime, p_part, PermGroup};
use crate::local_action::check_tower;
use crate::perm::Perm;
use crate::universal::TruncatedGroupSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// 1-based point, absent for global evidence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub name: String,
    pub holds: bool,
    pub clause: String,
    pub witnesses: Vec<Witness>,
    pub conclusion_label: String,
    #[serde(default)]
    pub vacuous: bool,
}

impl CriterionReport {
    fn new(name: &str, conclusion_label: &str) -> Self {
        CriterionReport {
            name: name.to_string(),
            holds: true,
            clause: String::new(),
            witnesses: Vec::new(),
            conclusion_label: conclusion_label.to_string(),
            vacuous: false,
        }
    }

    fn at(&mut self, omega: usize, data: Value) {
        self.witnesses.push(Witness {
            omega: Some(omega + 1),
            data,
        });
    }

    fn global(&mut self, data: Value) {
        self.witnesses.push(Witness { omega: None, data });
    }

    /// Human-readable multi-line summary.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{}: {}{}\n  clause: {}\n  conclusion: {}\n",
            self.name,
            if self.holds { "holds" } else { "fails" },
            if self.vacuous { " (vacuous)" } else { "" },
            self.clause,
            self.conclusion_label
        );
        for w in &self.witnesses {
            match w.omega {
                Some(o) => out.push_str(&format!("  omega={o}: {}\n", w.data)),
                None => out.push_str(&format!("  {}\n", w.data)),
            }
        }
        out
    }
}

fn cycles(g: &Perm) -> String {
    g.to_cycle_string()
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Checks `|Fp| = p-part(|F|)`, `Fp <= F` and that `Fp` is a `p`-group.
fn require_sylow(f: &PermGroup, fp: &PermGroup, p: u64) -> Result<()> {
    require_prime(p)?;
    if fp.degree() != f.degree() {
        return Err(Error::DegreeMismatch(f.degree(), fp.degree()));
    }
    if !fp.is_subgroup_of(f) {
        return Err(Error::NotASubgroup("the p-subgroup is not contained in F".into()));
    }
    let expected = p_part(f.order(), p);
    if fp.order() != expected || !fp.is_p_group(p) {
        return Err(Error::NotSylow {
            actual: fp.order(),
            expected,
        });
    }
    Ok(())
}

/// For every point: is `Fp_ω` a Sylow `p`-subgroup of `F_ω`?
pub fn stabilizer_sylow_condition(f: &PermGroup, fp: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_sylow(f, fp, p)?;
    let mut r = CriterionReport::new(
        "prop31",
        "U(F(p))_T is a p-Sylow subgroup of U(F)_T for every finite subtree T",
    );
    let mut failing = Vec::new();
    for w in 0..f.degree() {
        let fo = f.pointwise_stabilizer_order(&[w]);
        let po = fp.pointwise_stabilizer_order(&[w]);
        let ok = p_part(fo, p) == po;
        if !ok {
            failing.push(w + 1);
        }
        r.at(
            w,
            json!({"stabilizer_order": fo, "stabilizer_p_part": p_part(fo, p), "sylow_stabilizer_order": po, "holds": ok}),
        );
    }
    r.holds = failing.is_empty();
    r.vacuous = fp.is_trivial();
    r.clause = if r.holds {
        "p-part(|F_w|) = |F(p)_w| for all w".into()
    } else {
        format!("p-part(|F_w|) > |F(p)_w| at w in {failing:?}")
    };
    Ok(r)
}

/// [`stabilizer_sylow_condition`] for every Sylow subgroup of `F`.
///
/// For transitive `F` one choice suffices; for intransitive `F` the answer
/// can depend on the choice, which this sweep detects.
pub fn sylow_choice_sweep(f: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_prime(p)?;
    let fp = f.sylow_subgroup(p)?;
    let conjugates = f.distinct_conjugates(&fp)?;
    let mut r = CriterionReport::new(
        "prop31-all-sylows",
        "U(F(p))_b is a p-Sylow subgroup of U(F)_b for every choice of F(p)",
    );
    let mut verdicts = Vec::new();
    for q in &conjugates {
        let holds = stabilizer_sylow_condition(f, q, p)?.holds;
        verdicts.push(holds);
        let gens: Vec<String> = q.generators().iter().map(cycles).collect();
        r.global(json!({"sylow_generators": gens, "holds": holds}));
    }
    r.holds = verdicts.iter().all(|&h| h);
    let some = verdicts.iter().any(|&h| h);
    r.clause = match (r.holds, some) {
        (true, _) => format!("all {} Sylow subgroups pass", verdicts.len()),
        (false, true) => "the verdict depends on the choice of Sylow subgroup".into(),
        (false, false) => format!("all {} Sylow subgroups fail", verdicts.len()),
    };
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Sym,
    Alt,
}

impl GroupKind {
    pub fn group(self, d: usize) -> Result<PermGroup> {
        match self {
            GroupKind::Sym => PermGroup::symmetric(d),
            GroupKind::Alt => PermGroup::alternating(d),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sym" | "s" => Ok(GroupKind::Sym),
            "alt" | "a" => Ok(GroupKind::Alt),
            _ => Err(Error::PreconditionFailed(format!("unknown group kind {s:?}"))),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Sym => "Sym",
            GroupKind::Alt => "Alt",
        })
    }
}

/// Largest `s` with `p^s | d`.
fn p_valuation(mut d: u64, p: u64) -> u32 {
    let mut s = 0;
    while d % p == 0 {
        d /= p;
        s += 1;
    }
    s
}

/// Which closed-form clause holds for `Sym(d)` or `Alt(d)`: `"i"` when
/// `p > d`, `"ii"` when `s >= 1` and `p^(s+1) > d`, `"iii"` for `Alt(3)`
/// with `p = 2`.
pub fn symalt_clause(d: usize, p: u64, kind: GroupKind) -> Result<Option<&'static str>> {
    require_prime(p)?;
    if d < 3 {
        return Err(Error::DegreeOutOfRange(d));
    }
    let d64 = d as u64;
    let s = p_valuation(d64, p);
    Ok(if p > d64 {
        Some("i")
    } else if s >= 1 && p.pow(s + 1) > d64 {
        Some("ii")
    } else if kind == GroupKind::Alt && d == 3 && p == 2 {
        Some("iii")
    } else {
        None
    })
}

pub fn symalt_predicate(d: usize, p: u64, kind: GroupKind) -> Result<bool> {
    Ok(symalt_clause(d, p, kind)?.is_some())
}

/// Compares the closed form with the brute-force stabilizer computation.
pub fn symalt_crosscheck(d: usize, p: u64, kind: GroupKind) -> Result<bool> {
    Ok(symalt_predicate(d, p, kind)? == symalt_brute_force(d, p, kind)?)
}

fn symalt_brute_force(d: usize, p: u64, kind: GroupKind) -> Result<bool> {
    let f = kind.group(d)?;
    let fp = f.sylow_subgroup(p)?;
    Ok(stabilizer_sylow_condition(&f, &fp, p)?.holds)
}

pub fn symalt_report(d: usize, p: u64, kind: GroupKind) -> Result<CriterionReport> {
    let clause = symalt_clause(d, p, kind)?;
    let brute = symalt_brute_force(d, p, kind)?;
    let mut r = CriterionReport::new(
        "prop-symalt",
        "F(p)_w <= F_w is a p-Sylow subgroup for all w",
    );
    r.holds = clause.is_some();
    r.clause = match clause {
        Some(c) => format!("({c})"),
        None => "none of (i), (ii), (iii)".into(),
    };
    r.global(json!({
        "kind": kind.to_string(),
        "degree": d,
        "p": p,
        "s": p_valuation(d as u64, p),
        "brute_force": brute,
        "agrees": brute == r.holds,
    }));
    Ok(r)
}

/// Do `F` and `Fp` have the same orbits?
pub fn orbit_equality(f: &PermGroup, fp: &PermGroup) -> Result<bool> {
    if !fp.is_subgroup_of(f) {
        return Err(Error::NotASubgroup("the p-subgroup is not contained in F".into()));
    }
    Ok(f.orbits() == fp.orbits())
}

/// Orbit equality for `F` and its Sylow subgroup, together with the
/// stabilizer condition it implies.
pub fn orbit_equality_report(f: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_prime(p)?;
    let fp = f.sylow_subgroup(p)?;
    let mut r = CriterionReport::new(
        "prop-orbits",
        "F(p)_w <= F_w is a p-Sylow subgroup for all w",
    );
    r.holds = orbit_equality(f, &fp)?;
    let implied = stabilizer_sylow_condition(f, &fp, p)?.holds;
    r.clause = if r.holds {
        "F\\Omega = F(p)\\Omega".into()
    } else {
        "F(p) has more orbits than F".into()
    };
    r.global(json!({
        "orbits_F": f.orbits().one_based(),
        "orbits_Fp": fp.orbits().one_based(),
        "stabilizer_condition": implied,
    }));
    Ok(r)
}

/// For transitive `F` of degree `p^n`: both the stabilizer condition and
/// transitivity of the Sylow subgroup.
pub fn prime_power_degree_check(f: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_prime(p)?;
    let d = f.degree() as u64;
    if p_part(d, p) != d {
        return Err(Error::PreconditionFailed(format!("degree {d} is not a power of {p}")));
    }
    if !f.is_transitive() {
        return Err(Error::PreconditionFailed("F is not transitive".into()));
    }
    let fp = f.sylow_subgroup(p)?;
    let cond = stabilizer_sylow_condition(f, &fp, p)?;
    let transitive = fp.is_transitive();
    let mut r = CriterionReport::new(
        "prop-ppower",
        "F(p)_w <= F_w is a p-Sylow subgroup for all w, and F(p) is transitive",
    );
    r.holds = cond.holds && transitive;
    r.clause = match (cond.holds, transitive) {
        (true, true) => "both conclusions hold".into(),
        (false, _) => "stabilizer condition fails".into(),
        (true, false) => "F(p) is intransitive".into(),
    };
    r.witnesses = cond.witnesses;
    r.global(json!({"sylow_order": fp.order(), "sylow_transitive": transitive}));
    Ok(r)
}

/// Orbit equality plus `N_{F'_w}(F(p)_w) = F(p)_w` at every point.
fn localization_hypotheses(
    name: &str,
    label: &str,
    f: &PermGroup,
    f_prime: &PermGroup,
    fp: &PermGroup,
    p: u64,
) -> Result<CriterionReport> {
    require_sylow(f, fp, p)?;
    let mut r = CriterionReport::new(name, label);
    let orbits = orbit_equality(f, fp)?;
    r.global(json!({
        "orbit_equality": orbits,
        "orbits_F": f.orbits().one_based(),
        "orbits_Fp": fp.orbits().one_based(),
    }));
    let mut failing = Vec::new();
    for w in 0..f.degree() {
        let stab = f_prime.stabilizer(w)?;
        let fp_w = fp.stabilizer(w)?;
        let n = stab.normalizer(&fp_w)?;
        let ok = n == fp_w;
        let extra = n.elements().iter().find(|g| !fp_w.contains(g)).map(cycles);
        if !ok {
            failing.push(w + 1);
        }
        r.at(
            w,
            json!({
                "normalizer_order": n.order(),
                "sylow_stabilizer_order": fp_w.order(),
                "self_normalizing": ok,
                "normalizing_element": extra,
            }),
        );
    }
    r.holds = orbits && failing.is_empty();
    r.clause = match (orbits, failing.is_empty()) {
        (true, true) => "orbit equality and self-normalizing point stabilizers".into(),
        (false, true) => "orbit equality fails".into(),
        (true, false) => format!("N(F(p)_w) > F(p)_w at w in {failing:?}"),
        (false, false) => format!(
            "orbit equality fails; N(F(p)_w) > F(p)_w at w in {failing:?}"
        ),
    };
    r.vacuous = fp == f;
    Ok(r)
}

/// Hypotheses for `G(F, F')_(p) = G(F(p), F')`.
pub fn thm45_hypotheses(f: &PermGroup, f_prime: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_prime(p)?;
    thm45_hypotheses_with_sylow(f, f_prime, &f.sylow_subgroup(p)?, p)
}

/// [`thm45_hypotheses`] for a given Sylow subgroup `fp`.
pub fn thm45_hypotheses_with_sylow(
    f: &PermGroup,
    f_prime: &PermGroup,
    fp: &PermGroup,
    p: u64,
) -> Result<CriterionReport> {
    check_tower(f, f_prime)?;
    localization_hypotheses("thm45", "G(F,F')_(p) = G(F(p),F')", f, f_prime, fp, p)
}

/// Hypotheses for `N(F)_(p) = N(F(p))`, with `F'` the orbit closure `F^`.
pub fn thm46_hypotheses(f: &PermGroup, p: u64, cap: usize) -> Result<CriterionReport> {
    require_prime(p)?;
    let hat = f.hat_group(cap)?;
    let fp = f.sylow_subgroup(p)?;
    localization_hypotheses("thm46", "N(F)_(p) = N(F(p))", f, &hat, &fp, p)
}

/// The five conditions of the counterexample to a weaker localization
/// hypothesis: `F` transitive and non-regular, orbit equality,
/// `N_F(F(p)) = F(p)` and `F(p)` regular.
pub fn remark48_check(f: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_prime(p)?;
    let fp = f.sylow_subgroup(p)?;
    let transitive = f.is_transitive();
    let non_regular = !f.is_regular();
    let orbits = orbit_equality(f, &fp)?;
    let normalizer = f.normalizer(&fp)?;
    let self_normalizing = normalizer == fp;
    let sylow_regular = fp.is_regular();
    let mut r = CriterionReport::new("remark48", "U(F)_(p) = U(F) > G(F(p),F)");
    r.global(json!({
        "transitive": transitive,
        "non_regular": non_regular,
        "orbit_equality": orbits,
        "self_normalizing": self_normalizing,
        "sylow_regular": sylow_regular,
        "order_F": f.order(),
        "order_Fp": fp.order(),
        "normalizer_order": normalizer.order(),
    }));
    let named = [
        ("F intransitive", transitive),
        ("F regular", non_regular),
        ("orbit equality fails", orbits),
        ("N_F(F(p)) > F(p)", self_normalizing),
        ("F(p) not regular", sylow_regular),
    ];
    let failed: Vec<&str> = named.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    r.holds = failed.is_empty();
    r.clause = if r.holds {
        "all five conditions hold".into()
    } else {
        failed.join("; ")
    };
    Ok(r)
}

/// `A ∩ a A a^-1 = {id}` for a subgroup `A`.
fn meets_conjugate_trivially(a_grp: &PermGroup, a: &Perm) -> bool {
    let inv = a.inverse();
    a_grp
        .elements()
        .iter()
        .filter(|x| !x.is_identity())
        .all(|x| !a_grp.contains(&inv.mul(x).mul(a)))
}

/// For every `w`, an `a_w ∈ F_w` with `F(p)_l ∩ a_w F(p)_l a_w^-1` trivial
/// for all `l`, plus `N_F(F(p)) > F(p)`.
pub fn remark44_check(f: &PermGroup, p: u64) -> Result<CriterionReport> {
    require_prime(p)?;
    let fp = f.sylow_subgroup(p)?;
    let stabs: Vec<PermGroup> = (0..f.degree())
        .map(|l| fp.stabilizer(l))
        .collect::<Result<_>>()?;
    let mut r = CriterionReport::new("remark44", "G(F(p),F) < U(F)_(p) < U(F)");
    let mut missing = Vec::new();
    for w in 0..f.degree() {
        let fw = f.stabilizer(w)?;
        let a = fw
            .elements()
            .iter()
            .find(|a| stabs.iter().all(|s| meets_conjugate_trivially(s, a)))
            .copied();
        if a.is_none() {
            missing.push(w + 1);
        }
        r.at(w, json!({"a": a.as_ref().map(cycles)}));
    }
    let normalizer = f.normalizer(&fp)?;
    let grows = normalizer.order() > fp.order();
    r.global(json!({"normalizer_order": normalizer.order(), "sylow_order": fp.order()}));
    r.holds = missing.is_empty() && grows;
    r.vacuous = stabs.iter().all(|s| s.is_trivial());
    r.clause = match (missing.is_empty(), grows) {
        (true, true) => "witnesses a_w exist and N_F(F(p)) > F(p)".into(),
        (false, _) => format!("no witness a_w at w in {missing:?}"),
        (true, false) => "N_F(F(p)) = F(p)".into(),
    };
    Ok(r)
}

/// Edge-transitivity and discreteness of `U(F)` with finite-depth evidence.
///
/// Every automorphism in `U(F)` maps an edge of color `c` to an edge whose
/// color is in `F·c`, and `U(F)_b` acts on `S(b,1)` as `F`, so the orbits
/// of `U(F)_b` on the edges at `b` count the edge orbits. `U(F)_{B(b,1)}`
/// restricted to `B(b,2)` has order `prod |F_w|`, trivial exactly when `F`
/// is semiregular.
pub fn uf_property_report(f: &PermGroup) -> Result<CriterionReport> {
    let transitive = f.is_transitive();
    let semiregular = f.is_semiregular();
    let mut r = CriterionReport::new(
        "uf-properties",
        match (transitive, semiregular) {
            (true, true) => "edge-transitive, discrete",
            (true, false) => "edge-transitive, non-discrete",
            (false, true) => "not edge-transitive, discrete",
            (false, false) => "not edge-transitive, non-discrete",
        },
    );
    let spec = TruncatedGroupSpec::vertex_stabilizer(f.clone(), 1)?;
    let mut seen = vec![usize::MAX; f.degree()];
    let mut orbits = 0;
    let elements = spec.iter().collect::<Vec<_>>();
    for start in 0..f.degree() {
        if seen[start] != usize::MAX {
            continue;
        }
        let v = crate::tree::VertexAddress::base().neighbor(start);
        for g in &elements {
            let w = g.image(&v)?;
            seen[w.last().expect("sphere vertex")] = orbits;
        }
        orbits += 1;
    }
    let fixator = TruncatedGroupSpec::ball_fixator(f.clone(), 1, 2)?.order();
    let edge_transitive_at_depth = orbits == 1;
    let discrete_at_depth = fixator == BigUint::from(1u32);
    r.global(json!({
        "transitive": transitive,
        "semiregular": semiregular,
        "edge_orbits_at_b": orbits,
        "ball1_fixator_order_at_depth2": fixator.to_string(),
    }));
    r.holds = edge_transitive_at_depth == transitive && discrete_at_depth == semiregular;
    r.clause = if r.holds {
        "finite-depth evidence agrees with F".into()
    } else {
        "finite-depth evidence disagrees with F".into()
    };
    Ok(r)
}

/// Samples random 2-generated subgroups of `Sym(degree)` and returns those
/// passing [`remark48_check`], at most `want` of them.
pub fn remark48_search<R: Rng + ?Sized>(
    degree: usize,
    p: u64,
    tries: usize,
    want: usize,
    rng: &mut R,
) -> Result<Vec<PermGroup>> {
    require_prime(p)?;
    let sym = PermGroup::symmetric(degree)?;
    let elems = sym.elements();
    let mut hits: Vec<PermGroup> = Vec::new();
    for _ in 0..tries {
        if hits.len() >= want {
            break;
        }
        let a = elems[rng.gen_range(0..elems.len())];
        let b = elems[rng.gen_range(0..elems.len())];
        let g = PermGroup::new(degree, &[a, b])?;
        if !g.is_transitive() || g.is_regular() || hits.contains(&g) {
            continue;
        }
        if remark48_check(&g, p)?.holds {
            hits.push(g);
        }
    }
    Ok(hits)
}
