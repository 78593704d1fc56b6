use std::sync::Arc;

use super::space::{DSpace, Expr};
use super::{DTheory, TheoryError};
use crate::syntax::Formula;

/// Membership requirements for [`enumerate_theories`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub require: Vec<Formula>,
    pub exclude: Vec<Formula>,
}

impl Constraints {
    pub fn require<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        Constraints {
            require: items.into_iter().collect(),
            exclude: Vec::new(),
        }
    }
}

/// All theories satisfying the constraints, in a fixed order.
pub fn enumerate_theories(space: &Arc<DSpace>, c: &Constraints) -> Result<Theories, TheoryError> {
    let mut req = Vec::new();
    for f in &c.require {
        req.push(space.index_of(f).ok_or_else(|| TheoryError::NotInSet(f.clone()))?);
    }
    for f in &c.exclude {
        let i = space.index_of(f).ok_or_else(|| TheoryError::NotInSet(f.clone()))?;
        req.push(space.neg_idx(i));
    }
    Ok(Theories::from_indices(space.clone(), req))
}

enum Check {
    Member(usize),
    Clause(usize),
}

/// Depth-first enumeration over modal-atom assignments. Positions follow
/// the order of the adequate set; `[]`- and `|>`-atoms are tried true
/// first, propositional atoms false first.
pub struct Theories {
    space: Arc<DSpace>,
    checks: Vec<Check>,
    touching: Vec<Vec<usize>>,
    width: usize,
    assign: u128,
    choices: Vec<bool>,
    started: bool,
    done: bool,
}

impl Theories {
    pub(crate) fn from_indices(space: Arc<DSpace>, mut req: Vec<usize>) -> Self {
        req.sort_unstable();
        req.dedup();
        let width = space.modal_atom_count();
        let mut checks: Vec<Check> = req.into_iter().map(Check::Member).collect();
        checks.extend((0..space.clauses().len()).map(Check::Clause));
        let mut touching = vec![Vec::new(); width];
        let mut done = false;
        for (ci, c) in checks.iter().enumerate() {
            let e = expr(&space, c);
            let vars = e.vars();
            if vars == 0 && !e.eval(0) {
                done = true;
            }
            for (p, list) in touching.iter_mut().enumerate() {
                if vars >> p & 1 == 1 {
                    list.push(ci);
                }
            }
        }
        Theories {
            space,
            checks,
            touching,
            width,
            assign: 0,
            choices: Vec::with_capacity(width),
            started: false,
            done,
        }
    }

    fn first_value(&self, p: usize) -> bool {
        self.space.prop_mask() >> p & 1 == 0
    }

    fn set(&mut self, p: usize, v: bool) {
        if v {
            self.assign |= 1u128 << p;
        } else {
            self.assign &= !(1u128 << p);
        }
    }

    fn consistent(&self, p: usize) -> bool {
        let d = p + 1;
        let known = if d == 128 { u128::MAX } else { (1u128 << d) - 1 };
        self.touching[p]
            .iter()
            .all(|&ci| expr(&self.space, &self.checks[ci]).eval3(known, self.assign) != Some(false))
    }

    /// Moves to the next sibling assignment; false when exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some(second) = self.choices.pop() {
            let p = self.choices.len();
            if !second {
                let v = !self.first_value(p);
                self.set(p, v);
                self.choices.push(true);
                if self.consistent(p) {
                    return true;
                }
            }
        }
        false
    }

    fn descend(&mut self) -> bool {
        while self.choices.len() < self.width {
            let p = self.choices.len();
            let v = self.first_value(p);
            self.set(p, v);
            self.choices.push(false);
            if !self.consistent(p) && !self.backtrack() {
                return false;
            }
        }
        true
    }
}

fn expr<'a>(space: &'a DSpace, c: &Check) -> &'a Expr {
    match c {
        Check::Member(i) => space.expr(*i),
        Check::Clause(j) => &space.clauses()[*j],
    }
}

impl Iterator for Theories {
    type Item = DTheory;

    fn next(&mut self) -> Option<DTheory> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            self.backtrack() && self.descend()
        } else {
            self.started = true;
            self.descend()
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(DTheory::from_assign(self.space.clone(), self.assign))
    }
}
