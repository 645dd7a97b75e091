//! Fixed test corpus: every subgroup of `S_4` and a list of named groups.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::group::PermGroup;
use crate::perm::Perm;

/// A group with a display name.
#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub name: String,
    pub group: PermGroup,
}

impl NamedGroup {
    fn new(name: impl Into<String>, group: PermGroup) -> Self {
        NamedGroup {
            name: name.into(),
            group,
        }
    }
}

/// All subgroups of `Sym(degree)` generated by at most two elements,
/// deduplicated and sorted by order. For `degree <= 4` every subgroup is
/// 2-generated, so this is the full subgroup lattice.
pub fn two_generated_subgroups(degree: usize) -> Result<Vec<PermGroup>> {
    let sym = PermGroup::symmetric(degree)?;
    let elems = sym.elements();
    let mut seen: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut out = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i..] {
            let g = PermGroup::new(degree, &[*a, *b])?;
            if seen.insert(g.elements().to_vec()) {
                out.push(g);
            }
        }
    }
    out.sort_by_key(|g| (g.order(), g.elements().to_vec()));
    Ok(out)
}

/// All 30 subgroups of `S_4`.
pub fn subgroups_of_s4() -> Vec<PermGroup> {
    two_generated_subgroups(4).expect("S4 is small")
}

fn parse(d: usize, gens: &str) -> PermGroup {
    PermGroup::parse(d, gens).expect("corpus generators are valid")
}

/// `S_n` and `A_n` for `3 <= n <= 8`, and the small named groups.
pub fn named_groups() -> Vec<NamedGroup> {
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push(NamedGroup::new(format!("S{n}"), PermGroup::symmetric(n).expect("n <= 8")));
        out.push(NamedGroup::new(format!("A{n}"), PermGroup::alternating(n).expect("n <= 8")));
    }
    out.push(NamedGroup::new("D4", parse(4, "(1234),(13)")));
    out.push(NamedGroup::new("V4", parse(4, "(12)(34),(13)(24)")));
    out.push(NamedGroup::new("C8", PermGroup::cyclic(8).expect("degree 8")));
    out.push(NamedGroup::new("C9", PermGroup::cyclic(9).expect("degree 9")));
    out.push(NamedGroup::new("C3xC3", parse(6, "(123),(456)")));
    out.push(NamedGroup::new("S4 on 8 points", remark_group()));
    out
}

/// The transitive, non-regular copy of `S_4` in `S_8` whose Sylow
/// 2-subgroup is regular and self-normalizing.
pub fn remark_group() -> PermGroup {
    parse(8, "(123)(456),(14)(25)(37)(68)")
}

/// Named groups together with every subgroup of `S_4`.
pub fn full_corpus() -> Vec<NamedGroup> {
    let mut out = named_groups();
    for (i, g) in subgroups_of_s4().into_iter().enumerate() {
        out.push(NamedGroup::new(format!("S4 subgroup #{i} (order {})", g.order()), g));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s4_has_thirty_subgroups() {
        let subs = subgroups_of_s4();
        assert_eq!(subs.len(), 30);
        let s4 = PermGroup::symmetric(4).unwrap();
        assert!(subs.iter().all(|h| h.is_subgroup_of(&s4) && 24 % h.order() == 0));
        let orders: Vec<u64> = subs.iter().map(PermGroup::order).collect();
        let count = |n| orders.iter().filter(|&&o| o == n).count();
        assert_eq!(
            [1, 2, 3, 4, 6, 8, 12, 24].map(count),
            [1, 9, 4, 7, 4, 3, 1, 1]
        );
    }

    #[test]
    fn named_orders() {
        let g = named_groups();
        let order = |n: &str| g.iter().find(|x| x.name == n).unwrap().group.order();
        assert_eq!(order("S8"), 40320);
        assert_eq!(order("A7"), 2520);
        assert_eq!(order("C3xC3"), 9);
        assert_eq!(order("S4 on 8 points"), 24);
    }
}
