//! Finite stand-ins for maximal consistent sets over an adequate set, the
//! relations between them, and the searches for successors.

mod enumerate;
mod space;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::syntax::{adequate_closure, AdequateSet, Formula};

pub use enumerate::{enumerate_theories, Constraints, Theories};
pub(crate) use space::is_tautology;
pub use space::{DSpace, MAX_MODAL_ATOMS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Gl,
    Il,
    Ilm,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Gl => "GL",
            Logic::Il => "IL",
            Logic::Ilm => "ILM",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Logic::Gl),
            "il" => Ok(Logic::Il),
            "ilm" => Ok(Logic::Ilm),
            other => Err(format!("unknown logic `{other}` (expected gl, il or ilm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("{0} modal atoms; at most 128 are supported")]
    TooManyAtoms(usize),
    #[error("theories over different adequate sets")]
    Mismatch,
    #[error("`{0}` is not in the adequate set")]
    NotInSet(Formula),
    #[error("`{0}` does not have the expected shape")]
    Shape(Formula),
    #[error("`{0}` is not a member of the theory")]
    NotAMember(Formula),
}

/// The closure of `seed` together with `[]~A` and `[]~B` for every
/// `A |> B` occurring in it, so that critical successors can carry their
/// boxed obligations as members.
pub fn engine_adequate_set<'a, I>(seed: I) -> AdequateSet
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut all: Vec<Formula> = Vec::new();
    for f in seed {
        all.push(f.clone());
        for sub in f.subformulas() {
            if let Some((a, b)) = sub.as_rhd() {
                all.push(Formula::boxed(a.neg()));
                all.push(Formula::boxed(b.neg()));
            }
        }
    }
    adequate_closure(all.iter())
}

/// A maximal, Boolean-coherent, locally saturated subset of an adequate set,
/// stored as the truth assignment to its modal atoms.
#[derive(Clone)]
pub struct DTheory {
    space: Arc<DSpace>,
    assign: u128,
}

impl DTheory {
    pub(crate) fn from_assign(space: Arc<DSpace>, assign: u128) -> Self {
        DTheory { space, assign }
    }

    pub fn space(&self) -> &Arc<DSpace> {
        &self.space
    }

    pub fn assignment(&self) -> u128 {
        self.assign
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.space
            .index_of(f)
            .is_some_and(|i| self.contains_idx(i))
    }

    pub(crate) fn contains_idx(&self, i: usize) -> bool {
        self.space.holds(i, self.assign)
    }

    /// Members in the order of the adequate set.
    pub fn members(&self) -> Vec<Formula> {
        (0..self.space.len())
            .filter(|&i| self.contains_idx(i))
            .map(|i| self.space.get(i).clone())
            .collect()
    }

    /// Indices of the members of the form `[]A`.
    pub(crate) fn box_members(&self) -> impl Iterator<Item = usize> + '_ {
        self.space
            .adequate()
            .boxed_indices()
            .iter()
            .copied()
            .filter(|&i| self.contains_idx(i))
    }

    /// Bit-set over modal-atom positions of the boxes in the theory.
    pub(crate) fn box_bits(&self) -> u128 {
        self.assign & self.space.box_mask()
    }

    fn same_space(&self, other: &DTheory) -> Result<(), TheoryError> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space.adequate() == other.space.adequate() {
            Ok(())
        } else {
            Err(TheoryError::Mismatch)
        }
    }
}

impl PartialEq for DTheory {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign && self.same_space(other).is_ok()
    }
}

impl Eq for DTheory {}

impl std::hash::Hash for DTheory {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.assign.hash(state);
    }
}

impl fmt::Debug for DTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// Members a `G`-successor must contain: `A` and `[]A` for `[]A` in `G`,
/// and for `A |> bot` in `G` the negation `~A` together with `[]~A` when
/// present.
pub(crate) fn succ_req(g: &DTheory) -> Vec<usize> {
    let s = &g.space;
    let mut out = Vec::new();
    for i in g.box_members() {
        let body = s.get(i).as_box().expect("boxed index");
        out.push(s.index_of(body).expect("subformula closed"));
        out.push(i);
    }
    for_rhd_into(g, None, &mut out);
    out
}

/// `~A` and `[]~A` (when present) for every `A |> c` in `g`.
fn for_rhd_into(g: &DTheory, c: Option<&Formula>, out: &mut Vec<usize>) {
    let s = &g.space;
    let target = c.cloned().unwrap_or(Formula::Bot);
    for i in 0..s.len() {
        if let Some((a, b)) = s.get(i).as_rhd() {
            if *b == target && g.contains_idx(i) {
                push_negation(s, a, out);
            }
        }
    }
}

fn push_negation(s: &DSpace, a: &Formula, out: &mut Vec<usize>) {
    let ia = s.index_of(a).expect("subformula closed");
    let na = s.neg_idx(ia);
    out.push(na);
    if let Some(b) = s.box_of(s.get(na)) {
        out.push(b);
    }
}

/// Members a `C`-critical successor of `g` must contain. The implicit
/// `C |> C` contributes `~C` and `[]~C` unless `C` is `bot`.
pub(crate) fn crit_req(g: &DTheory, c: &Formula) -> Result<Vec<usize>, TheoryError> {
    let s = &g.space;
    let mut out = succ_req(g);
    if c.is_bot() {
        return Ok(out);
    }
    if !s.adequate().contains(c) {
        return Err(TheoryError::NotInSet(c.clone()));
    }
    for_rhd_into(g, Some(c), &mut out);
    push_negation(s, c, &mut out);
    Ok(out)
}

/// The boxes of `g`.
pub(crate) fn box_incl_req(g: &DTheory) -> Vec<usize> {
    g.box_members().collect()
}

/// The relation `G ≺ D`.
pub fn succ(g: &DTheory, d: &DTheory) -> Result<bool, TheoryError> {
    g.same_space(d)?;
    Ok(succ_req(g).into_iter().all(|i| d.contains_idx(i)))
}

/// The relation `G ≺_C D`.
pub fn crit_succ(g: &DTheory, c: &Formula, d: &DTheory) -> Result<bool, TheoryError> {
    g.same_space(d)?;
    Ok(crit_req(g, c)?.into_iter().all(|i| d.contains_idx(i)))
}

/// The relation `G ⊆_□ D`.
pub fn box_incl(g: &DTheory, d: &DTheory) -> Result<bool, TheoryError> {
    g.same_space(d)?;
    Ok(g.box_bits() & !d.box_bits() == 0)
}

/// The successor obligation `~A` for a problem `nf` whose witness box
/// (see [`problem_box`]) is missing from the adequate set. Every R-successor
/// of the witness must contain it.
pub fn obligation(space: &DSpace, nf: &Formula) -> Option<Formula> {
    let (a, _) = problem_parts(nf)?;
    problem_box(space, nf).is_none().then(|| a.neg())
}

/// The box a maximal witness for `nf` contains: `[]A` for `~[]A` and
/// `[]~A` for `~(A |> B)`, when present.
pub(crate) fn problem_box(space: &DSpace, nf: &Formula) -> Option<usize> {
    match nf.as_not()? {
        Formula::Box(_) => space.index_of(nf.as_not()?),
        Formula::Rhd(a, _) => space.box_of(&a.neg()),
        _ => None,
    }
}

/// Splits `~(A |> B)` into `(A, B)`. `~[]A` is read as `~(~A |> bot)`.
pub(crate) fn problem_parts(nf: &Formula) -> Option<(Formula, Formula)> {
    match nf.as_not()? {
        Formula::Rhd(a, b) => Some(((**a).clone(), (**b).clone())),
        Formula::Box(a) => Some((a.neg(), Formula::Bot)),
        _ => None,
    }
}

pub(crate) fn problem_req(g: &DTheory, nf: &Formula) -> Result<Vec<usize>, TheoryError> {
    let (a, b) = problem_parts(nf).ok_or_else(|| TheoryError::Shape(nf.clone()))?;
    let s = &g.space;
    let mut req = crit_req(g, &b)?;
    let ia = s.index_of(&a).ok_or_else(|| TheoryError::NotInSet(a.clone()))?;
    req.push(ia);
    req.extend(problem_box(s, nf));
    Ok(req)
}

/// Candidate witnesses for `~(A |> B)` in `g`: `B`-critical successors
/// containing `A` and, when present, `[]~A`.
pub fn extend_problem(g: &DTheory, nf: &Formula) -> Result<Theories, TheoryError> {
    if !g.contains(nf) {
        return Err(TheoryError::NotAMember(nf.clone()));
    }
    let req = problem_req(g, nf)?;
    Ok(Theories::from_indices(g.space.clone(), req))
}

pub(crate) fn deficiency_req(
    g: &DTheory,
    b: &Formula,
    d: &DTheory,
    cd: &Formula,
    ilm: bool,
) -> Result<Vec<usize>, TheoryError> {
    let (_, target) = cd.as_rhd().ok_or_else(|| TheoryError::Shape(cd.clone()))?;
    let s = &g.space;
    let mut req = crit_req(g, b)?;
    req.push(s.index_of(target).expect("subformula closed"));
    if let Some(bx) = s.box_of(&target.neg()) {
        req.push(bx);
    }
    if ilm {
        req.extend(box_incl_req(d));
    }
    Ok(req)
}

/// Candidate `S`-exits for the deficiency `(G, D, C |> D')` where `D` lies
/// `B`-critically above `G`: `B`-critical successors containing `D'` (and
/// `[]~D'` when present) whose boxes include those of `D`.
pub fn extend_deficiency_ilm(
    g: &DTheory,
    b: &Formula,
    d: &DTheory,
    cd: &Formula,
) -> Result<Theories, TheoryError> {
    g.same_space(d)?;
    if !g.contains(cd) {
        return Err(TheoryError::NotAMember(cd.clone()));
    }
    let req = deficiency_req(g, b, d, cd, true)?;
    Ok(Theories::from_indices(g.space.clone(), req))
}

/// Members a predecessor `G` of `d` must contain for `G ≺ d`: the
/// negations of the boxes and of the `A |> bot` whose demands `d` fails.
pub(crate) fn pred_req(d: &DTheory) -> Vec<usize> {
    let s = &d.space;
    let mut req = Vec::new();
    for &i in s.adequate().boxed_indices() {
        let body = s.index_of(s.get(i).as_box().expect("boxed")).expect("closed");
        if !(d.contains_idx(i) && d.contains_idx(body)) {
            req.push(s.neg_idx(i));
        }
    }
    for i in 0..s.len() {
        if let Some((a, b)) = s.get(i).as_rhd() {
            if b.is_bot() {
                let mut need = Vec::new();
                push_negation(s, a, &mut need);
                if !need.into_iter().all(|j| d.contains_idx(j)) {
                    req.push(s.neg_idx(i));
                }
            }
        }
    }
    req
}

/// Members `G` must contain for `G ⊆_□ d`: the negations of the boxes
/// missing from `d`.
pub(crate) fn box_subset_req(d: &DTheory) -> Vec<usize> {
    let s = &d.space;
    s.adequate()
        .boxed_indices()
        .iter()
        .filter(|&&i| !d.contains_idx(i))
        .map(|&i| s.neg_idx(i))
        .collect()
}

/// Theories `G` with `G ≺ D0` and `G ≺ D1`.
pub fn common_predecessor(d0: &DTheory, d1: &DTheory) -> Result<Theories, TheoryError> {
    d0.same_space(d1)?;
    let mut req = pred_req(d0);
    req.extend(pred_req(d1));
    Ok(Theories::from_indices(d0.space.clone(), req))
}

#[cfg(test)]
mod tests;
