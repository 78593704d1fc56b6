use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{Logic, TheoryError};
use crate::syntax::{AdequateSet, Formula};

/// Most modal atoms a space may have; assignments are `u128` bit-sets.
pub const MAX_MODAL_ATOMS: usize = 128;

/// Boolean formula over modal-atom positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Expr {
    False,
    Var(u8),
    Imp(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, val: u128) -> bool {
        match self {
            Expr::False => false,
            Expr::Var(i) => val >> i & 1 == 1,
            Expr::Imp(a, b) => !a.eval(val) || b.eval(val),
        }
    }

    /// Three-valued evaluation; `None` when the known positions do not
    /// settle the value.
    pub fn eval3(&self, known: u128, val: u128) -> Option<bool> {
        match self {
            Expr::False => Some(false),
            Expr::Var(i) => (known >> i & 1 == 1).then(|| val >> i & 1 == 1),
            Expr::Imp(a, b) => match (a.eval3(known, val), b.eval3(known, val)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    pub fn vars(&self) -> u128 {
        match self {
            Expr::False => 0,
            Expr::Var(i) => 1u128 << i,
            Expr::Imp(a, b) => a.vars() | b.vars(),
        }
    }
}

/// An adequate set prepared for theory search: its modal atoms, every member
/// compiled to a Boolean expression over them, and the saturation
/// constraints.
#[derive(Debug)]
pub struct DSpace {
    adequate: AdequateSet,
    logic: Logic,
    atoms: Vec<usize>,
    exprs: Vec<Expr>,
    neg: Vec<usize>,
    clauses: Vec<Expr>,
    prop_mask: u128,
    box_mask: u128,
}

impl DSpace {
    pub fn new(adequate: AdequateSet, logic: Logic) -> Result<Arc<DSpace>, TheoryError> {
        let members = adequate.members();
        let atoms: Vec<usize> = (0..members.len())
            .filter(|&i| members[i].is_modal_atom())
            .collect();
        if atoms.len() > MAX_MODAL_ATOMS {
            return Err(TheoryError::TooManyAtoms(atoms.len()));
        }
        let mut prop_mask = 0u128;
        let mut box_mask = 0u128;
        for (k, &i) in atoms.iter().enumerate() {
            match &members[i] {
                Formula::Atom(_) => prop_mask |= 1 << k,
                Formula::Box(_) => box_mask |= 1 << k,
                _ => {}
            }
        }
        let lookup: HashMap<&Formula, u8> = atoms
            .iter()
            .enumerate()
            .map(|(k, &i)| (&members[i], k as u8))
            .collect();
        let exprs = members
            .iter()
            .map(|f| compile(f, &lookup).expect("adequate sets contain their modal atoms"))
            .collect();
        let neg = members
            .iter()
            .map(|f| adequate.index_of(&f.neg()).expect("closed under single negation"))
            .collect();
        let clauses = saturation(&adequate, logic)
            .iter()
            .filter_map(|f| compile(f, &lookup))
            .collect();
        Ok(Arc::new(DSpace {
            adequate,
            logic,
            atoms,
            exprs,
            neg,
            clauses,
            prop_mask,
            box_mask,
        }))
    }

    pub fn adequate(&self) -> &AdequateSet {
        &self.adequate
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn len(&self) -> usize {
        self.adequate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adequate.is_empty()
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.adequate.index_of(f)
    }

    pub fn get(&self, i: usize) -> &Formula {
        self.adequate.get(i)
    }

    pub fn modal_atoms(&self) -> impl Iterator<Item = &Formula> {
        self.atoms.iter().map(|&i| self.adequate.get(i))
    }

    pub fn modal_atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub(crate) fn neg_idx(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub(crate) fn expr(&self, i: usize) -> &Expr {
        &self.exprs[i]
    }

    pub(crate) fn clauses(&self) -> &[Expr] {
        &self.clauses
    }

    pub(crate) fn prop_mask(&self) -> u128 {
        self.prop_mask
    }

    /// Positions of the `[]`-atoms.
    pub(crate) fn box_mask(&self) -> u128 {
        self.box_mask
    }

    pub(crate) fn holds(&self, i: usize, assign: u128) -> bool {
        self.exprs[i].eval(assign)
    }

    #[cfg(test)]
    pub(crate) fn satisfies_clauses(&self, assign: u128) -> bool {
        self.clauses.iter().all(|c| c.eval(assign))
    }

    /// Index of `[]f`, if present.
    pub(crate) fn box_of(&self, f: &Formula) -> Option<usize> {
        self.adequate.index_of(&Formula::boxed(f.clone()))
    }
}

fn compile(f: &Formula, lookup: &HashMap<&Formula, u8>) -> Option<Expr> {
    Some(match f {
        Formula::Bot => Expr::False,
        Formula::Implies(a, b) => Expr::Imp(Box::new(compile(a, lookup)?), Box::new(compile(b, lookup)?)),
        _ => Expr::Var(*lookup.get(f)?),
    })
}

/// Whether `f` is a propositional tautology over its modal atoms.
pub(crate) fn is_tautology(f: &Formula) -> bool {
    let mut atoms = BTreeSet::new();
    modal_atoms_of(f, &mut atoms);
    if atoms.len() > 16 {
        return false;
    }
    let lookup: HashMap<&Formula, u8> = atoms.iter().enumerate().map(|(k, a)| (*a, k as u8)).collect();
    let e = compile(f, &lookup).expect("all atoms collected");
    (0u128..1 << atoms.len()).all(|v| e.eval(v))
}

pub(crate) fn modal_atoms_of<'a>(f: &'a Formula, out: &mut BTreeSet<&'a Formula>) {
    match f {
        Formula::Bot => {}
        Formula::Implies(a, b) => {
            modal_atoms_of(a, out);
            modal_atoms_of(b, out);
        }
        _ => {
            out.insert(f);
        }
    }
}

/// Valid formulas of the logic built from members of `d`: axiom instances
/// whose modal atoms all lie in `d`, plus a few derived principles.
pub(crate) fn saturation(d: &AdequateSet, logic: Logic) -> Vec<Formula> {
    let has = |f: &Formula| d.contains(f);
    let mut out = Vec::new();
    for f in d.members() {
        match f {
            Formula::Box(x) => {
                let bx = Formula::boxed(f.clone());
                if has(&bx) {
                    // L2
                    out.push(Formula::implies(f.clone(), bx));
                }
                if let Formula::Implies(y, z) = &**x {
                    let (by, bz) = (Formula::boxed((**y).clone()), Formula::boxed((**z).clone()));
                    if has(&by) && has(&bz) {
                        // L1
                        out.push(Formula::implies(
                            f.clone(),
                            Formula::implies(by.clone(), bz),
                        ));
                    }
                    if **y == Formula::boxed((**z).clone()) {
                        // L3
                        out.push(Formula::implies(f.clone(), (**y).clone()));
                    }
                    let r = Formula::rhd((**y).clone(), (**z).clone());
                    if logic != Logic::Gl && has(&r) {
                        // J1
                        out.push(Formula::implies(f.clone(), r));
                    }
                }
                if is_tautology(x) {
                    out.push(f.clone());
                }
            }
            Formula::Rhd(a, b) if logic != Logic::Gl => {
                rhd_clauses(d, f, a, b, logic, &mut out);
            }
            _ => {}
        }
    }
    out
}

fn negations(a: &Formula) -> Vec<Formula> {
    let mut v = vec![Formula::not(a.clone())];
    let n = a.neg();
    if n != v[0] {
        v.push(n);
    }
    v
}

fn rhd_clauses(d: &AdequateSet, f: &Formula, a: &Formula, b: &Formula, logic: Logic, out: &mut Vec<Formula>) {
    let has = |f: &Formula| d.contains(f);
    // J1 with a valid implication.
    if is_tautology(&Formula::implies(a.clone(), b.clone())) {
        out.push(f.clone());
    }
    for c in d.members() {
        if let Formula::Rhd(b2, c2) = c {
            if **b2 == *b {
                // J2
                let ac = Formula::rhd(a.clone(), (**c2).clone());
                if has(&ac) {
                    out.push(Formula::implies(
                        Formula::and(f.clone(), c.clone()),
                        ac,
                    ));
                }
            }
        }
    }
    // J3
    if let Some((a1, a2)) = a.as_or() {
        let (r1, r2) = (Formula::rhd(a1.clone(), b.clone()), Formula::rhd(a2.clone(), b.clone()));
        if has(&r1) && has(&r2) {
            out.push(Formula::implies(Formula::and(r1, r2), f.clone()));
        }
    }
    // J4, read as: a |> b and [](not b) give [](not a).
    for na in negations(a) {
        for nb in negations(b) {
            let (ba, bb) = (Formula::boxed(na.clone()), Formula::boxed(nb.clone()));
            if has(&ba) && has(&bb) {
                out.push(Formula::implies(
                    Formula::and(f.clone(), bb),
                    ba,
                ));
            }
        }
    }
    // J5
    if let Some(Formula::Box(nb)) = a.as_not() {
        if negations(b).iter().any(|n| **nb == *n) {
            out.push(f.clone());
        }
    }
    // [](not a) gives a |> anything; a |> bot gives [](not a).
    for na in negations(a) {
        let ba = Formula::boxed(na);
        if has(&ba) {
            out.push(Formula::implies(ba.clone(), f.clone()));
            if b.is_bot() {
                out.push(Formula::implies(f.clone(), ba));
            }
        }
    }
    // M
    if logic == Logic::Ilm {
        if let (Some((a0, ca)), Some((b0, cb))) = (a.as_and(), b.as_and()) {
            if ca == cb && matches!(ca, Formula::Box(_)) {
                let base = Formula::rhd(a0.clone(), b0.clone());
                if has(&base) {
                    out.push(Formula::implies(base, f.clone()));
                }
            }
        }
    }
}
