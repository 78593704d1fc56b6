//! Formulas of the interpretability language, their concrete syntax and
//! adequate sets.

mod adequate;
mod parse;
pub(crate) mod render;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use adequate::{adequate_closure, AdequateSet};
pub use parse::{parse, ParseError};
pub use render::render;

/// A formula over the five primitive connectives.
///
/// Derived connectives (`~`, `&`, `|`, `<->`, `top`, `<>`) only exist as
/// constructors; they always expand to primitives, so structural equality
/// is the canonical equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bot,
    Atom(Arc<str>),
    Implies(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Rhd(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn bot() -> Self {
        Formula::Bot
    }

    pub fn atom(name: &str) -> Self {
        Formula::Atom(Arc::from(name))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(a: Formula) -> Self {
        Formula::Box(Arc::new(a))
    }

    pub fn rhd(a: Formula, b: Formula) -> Self {
        Formula::Rhd(Arc::new(a), Arc::new(b))
    }

    /// `~a`, i.e. `a -> bot`.
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bot)
    }

    pub fn top() -> Self {
        Formula::not(Formula::Bot)
    }

    /// `a & b`, i.e. `~(a -> ~b)`.
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// `a | b`, i.e. `~a -> b`.
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::implies(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// `<>a`, i.e. `~[]~a`.
    pub fn diamond(a: Formula) -> Self {
        Formula::not(Formula::boxed(Formula::not(a)))
    }

    /// Left-nested conjunction; the empty conjunction is `top`.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; the empty disjunction is `bot`.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Bot,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Single negation: strips one outer negation instead of stacking a
    /// second one.
    pub fn neg(&self) -> Formula {
        match self.as_not() {
            Some(inner) => inner.clone(),
            None => Formula::not(self.clone()),
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Bot)
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if b.is_bot() => Some(a),
            _ => None,
        }
    }

    pub fn as_top(&self) -> bool {
        matches!(self.as_not(), Some(Formula::Bot))
    }

    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self.as_not()? {
            Formula::Implies(a, nb) => Some((a, nb.as_not()?)),
            _ => None,
        }
    }

    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(na, b) => Some((na.as_not()?, b)),
            _ => None,
        }
    }

    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let (l, r) = self.as_and()?;
        match (l, r) {
            (Formula::Implies(a, b), Formula::Implies(c, d)) if a == d && b == c => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_diamond(&self) -> Option<&Formula> {
        match self.as_not()? {
            Formula::Box(b) => b.as_not(),
            _ => None,
        }
    }

    pub fn as_box(&self) -> Option<&Formula> {
        match self {
            Formula::Box(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_rhd(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Rhd(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// All subformulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Bot | Formula::Atom(_) => {}
            Formula::Box(a) => a.collect_subformulas(out),
            Formula::Implies(a, b) | Formula::Rhd(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(name) = f {
                out.insert(name.to_string());
            }
        });
        out
    }

    fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Bot | Formula::Atom(_) => {}
            Formula::Box(a) => a.visit(f),
            Formula::Implies(a, b) | Formula::Rhd(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Number of primitive nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(_) => 1,
            Formula::Box(a) => 1 + a.size(),
            Formula::Implies(a, b) | Formula::Rhd(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth of `[]` and `|>`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(_) => 0,
            Formula::Implies(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box(a) => 1 + a.modal_depth(),
            Formula::Rhd(a, b) => 1 + a.modal_depth().max(b.modal_depth()),
        }
    }

    pub fn has_rhd(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Rhd(..)));
        found
    }

    /// Atoms, boxes and `|>`-formulas are opaque to propositional logic.
    pub fn is_modal_atom(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Box(_) | Formula::Rhd(..))
    }

    /// Replace atoms according to `map`; unmapped atoms stay.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Atom(name) => map(name).unwrap_or_else(|| self.clone()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Box(a) => Formula::boxed(a.substitute(map)),
            Formula::Rhd(a, b) => Formula::rhd(a.substitute(map), b.substitute(map)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(self))
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// `n` atoms named `q0, q1, ...` that do not occur in `avoid`.
pub fn fresh_atoms(avoid: &Formula, n: usize) -> Vec<Formula> {
    let used = avoid.atoms();
    (0..)
        .map(|i| format!("q{i}"))
        .filter(|name| !used.contains(name))
        .take(n)
        .map(|name| Formula::atom(&name))
        .collect()
}
