use std::collections::{BTreeMap, BTreeSet};

use super::Formula;

/// A finite set closed under subformulas and single negations.
///
/// Members are kept in a fixed order (by size, then structurally) so that
/// indices are stable and enumeration built on top is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdequateSet {
    members: Vec<Formula>,
    index: BTreeMap<Formula, usize>,
    boxed: Vec<usize>,
}

impl AdequateSet {
    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.members[i]
    }

    /// Indices of the members of the form `[]D`.
    pub fn boxed_indices(&self) -> &[usize] {
        &self.boxed
    }

    pub fn boxed_members(&self) -> impl Iterator<Item = &Formula> {
        self.boxed.iter().map(|&i| &self.members[i])
    }

    pub fn as_set(&self) -> BTreeSet<Formula> {
        self.members.iter().cloned().collect()
    }
}

/// Subformulas with negation read as a unary connective: `~a` contributes
/// `a`, not `bot`.
pub(crate) fn collect(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !out.insert(f.clone()) {
        return;
    }
    if let Some(a) = f.as_not() {
        return collect(a, out);
    }
    match f {
        Formula::Bot | Formula::Atom(_) => {}
        Formula::Box(a) => collect(a, out),
        Formula::Implies(a, b) | Formula::Rhd(a, b) => {
            collect(a, out);
            collect(b, out);
        }
    }
}

/// Smallest adequate superset of `seed`.
pub fn adequate_closure<'a, I>(seed: I) -> AdequateSet
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut set = BTreeSet::new();
    for f in seed {
        collect(f, &mut set);
    }
    let negations: Vec<Formula> = set
        .iter()
        .filter(|f| f.as_not().is_none())
        .map(|f| Formula::not(f.clone()))
        .collect();
    set.extend(negations);

    let mut members: Vec<Formula> = set.into_iter().collect();
    members.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    let index = members
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();
    let boxed = members
        .iter()
        .enumerate()
        .filter(|(_, f)| matches!(f, Formula::Box(_)))
        .map(|(i, _)| i)
        .collect();
    AdequateSet {
        members,
        index,
        boxed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, render::tests::arb_formula};
    use proptest::prelude::*;

    fn set(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    fn closure_of(items: &[&str]) -> AdequateSet {
        let seed: Vec<Formula> = items.iter().map(|s| parse(s).unwrap()).collect();
        adequate_closure(&seed)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(closure_of(&["p"]).as_set(), set(&["p", "~p"]));
        assert_eq!(
            closure_of(&["[]p"]).as_set(),
            set(&["[]p", "~[]p", "p", "~p"])
        );
        assert_eq!(
            closure_of(&["p |> q"]).as_set(),
            set(&["p |> q", "~(p |> q)", "p", "~p", "q", "~q"])
        );
    }

    #[test]
    fn boxed_members_are_cached() {
        let d = closure_of(&["[]p -> [][]p"]);
        let boxes: BTreeSet<Formula> = d.boxed_members().cloned().collect();
        assert_eq!(boxes, set(&["[]p", "[][]p"]));
    }

    #[test]
    fn no_double_negations_added() {
        let d = closure_of(&["~p", "~[]q"]);
        for f in d.members() {
            if let Some(inner) = f.as_not() {
                assert!(inner.as_not().is_none(), "{f}");
            }
        }
    }

    fn is_closed(d: &AdequateSet) -> bool {
        d.members().iter().all(|f| {
            let mut subs = BTreeSet::new();
            collect(f, &mut subs);
            subs.iter().all(|g| d.contains(g))
                && (f.as_not().is_some() || d.contains(&Formula::not(f.clone())))
        })
    }

    proptest! {
        #[test]
        fn closure_invariants(seed in proptest::collection::vec(arb_formula(), 1..4)) {
            let d = adequate_closure(&seed);
            prop_assert!(is_closed(&d));
            let mut subs = BTreeSet::new();
            for f in &seed {
                collect(f, &mut subs);
            }
            prop_assert!(d.len() <= 2 * subs.len());
            for f in &seed {
                prop_assert!(d.contains(f));
            }
            let again = adequate_closure(d.members());
            prop_assert_eq!(again, d.clone());
            let mut bigger = seed.clone();
            bigger.push(Formula::boxed(Formula::atom("s")));
            let e = adequate_closure(&bigger);
            prop_assert!(d.members().iter().all(|f| e.contains(f)));
        }
    }
}
