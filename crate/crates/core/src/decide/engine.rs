use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::viability::Viability;
use super::{Budget, Certificate};
use crate::construction::{
    eliminate_deficiency, eliminate_problem, verify_truth_lemma, Candidates, LabeledFrame,
};
use crate::semantics::{forces, validate_il, validate_ilm};
use crate::syntax::Formula;
use crate::theory::{engine_adequate_set, DSpace, DTheory, Logic, Theories, TheoryError};

/// Why a search stopped without an answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub reason: String,
    pub steps: usize,
    pub backtracks: usize,
    pub largest_frame: usize,
}

#[derive(Clone, Debug)]
pub enum SatResult {
    Certificate(Certificate),
    Unsat,
    Exhausted(BudgetReport),
}

struct Abort(String);

/// One satisfiability search over a fixed adequate set.
pub struct Engine<'o> {
    logic: Logic,
    space: Arc<DSpace>,
    budget: Budget,
    steps: usize,
    backtracks: usize,
    largest: usize,
    /// World limit of the current deepening round.
    limit: usize,
    capped: bool,
    incomplete: Option<String>,
    viability: Viability,
    observer: Option<Box<dyn FnMut(&LabeledFrame) + 'o>>,
}

impl<'o> Engine<'o> {
    pub fn new(logic: Logic, f: &Formula, budget: &Budget) -> Result<Self, TheoryError> {
        let space = DSpace::new(engine_adequate_set([f]), logic)?;
        Ok(Self::with_space(space, budget))
    }

    pub fn with_space(space: Arc<DSpace>, budget: &Budget) -> Self {
        let logic = space.logic();
        Engine {
            logic,
            viability: Viability::new(space.clone(), logic, budget.max_viability),
            space,
            budget: budget.clone(),
            steps: 0,
            backtracks: 0,
            largest: 0,
            limit: budget.max_worlds,
            capped: false,
            incomplete: None,
            observer: None,
        }
    }

    /// Called with the working frame before every elimination step.
    pub fn observe(mut self, f: impl FnMut(&LabeledFrame) + 'o) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    pub fn space(&self) -> &Arc<DSpace> {
        &self.space
    }

    pub fn viable(&mut self, t: &DTheory) -> bool {
        self.viability.viable(t)
    }

    fn report(&self, reason: String) -> BudgetReport {
        BudgetReport {
            reason,
            steps: self.steps,
            backtracks: self.backtracks,
            largest_frame: self.largest,
        }
    }

    /// Searches for a model of `f` at its root.
    pub fn satisfy(&mut self, f: &Formula) -> SatResult {
        let Some(i) = self.space.index_of(f) else {
            return SatResult::Exhausted(self.report("formula outside the adequate set".into()));
        };
        self.deepen(|e| {
            for root in Theories::from_indices(e.space.clone(), vec![i]) {
                if !e.viable(&root) {
                    continue;
                }
                let frame = LabeledFrame::new(e.space.clone(), root);
                if let Some(c) = e.run(frame, f)? {
                    return Ok(Some(c));
                }
            }
            Ok(None)
        })
    }

    /// Searches for a completion of a prepared frame; `f` must hold at
    /// world 0 of the result.
    pub fn complete(&mut self, frame: LabeledFrame, f: &Formula) -> SatResult {
        self.deepen(|e| e.run(frame.clone(), f))
    }

    /// Runs `attempt` under world limits 8, 16, ... up to the budget, so
    /// that small models are found before the search commits to a deep
    /// branch. A round that never hit its limit is conclusive.
    fn deepen(
        &mut self,
        mut attempt: impl FnMut(&mut Self) -> Result<Option<Certificate>, Abort>,
    ) -> SatResult {
        let max = self.budget.max_worlds;
        let mut limit = max.min(8);
        loop {
            self.limit = limit;
            self.capped = false;
            match attempt(self) {
                Ok(Some(c)) => return SatResult::Certificate(c),
                Ok(None) if self.capped && limit < max => limit = (limit * 2).min(max),
                Ok(None) => return self.finish(),
                Err(Abort(reason)) => return SatResult::Exhausted(self.report(reason)),
            }
        }
    }

    fn finish(&self) -> SatResult {
        if self.capped {
            SatResult::Exhausted(self.report(format!("world limit {} reached", self.limit)))
        } else if let Some(reason) = &self.incomplete {
            SatResult::Exhausted(self.report(reason.clone()))
        } else if self.viability.gave_up {
            SatResult::Exhausted(self.report("viability work limit reached".into()))
        } else {
            SatResult::Unsat
        }
    }

    fn run(&mut self, frame: LabeledFrame, f: &Formula) -> Result<Option<Certificate>, Abort> {
        let Some(done) = self.search(frame)? else {
            return Ok(None);
        };
        match self.certify(&done, f) {
            Some(c) => Ok(Some(c)),
            None => {
                self.incomplete = Some("a finished frame failed certification".into());
                Ok(None)
            }
        }
    }

    fn certify(&self, frame: &LabeledFrame, f: &Formula) -> Option<Certificate> {
        let model = frame.to_model();
        let violations = match self.logic {
            Logic::Ilm => validate_ilm(&model.frame),
            _ => validate_il(&model.frame),
        };
        let world = LabeledFrame::world_name(0);
        let labels: BTreeMap<String, DTheory> = frame.labels_by_name();
        let ok = violations.is_empty()
            && forces(&model, &world, f).ok()?
            && verify_truth_lemma(&model, &labels, &self.space);
        ok.then(|| Certificate {
            model,
            world,
            labels: Some(labels),
        })
    }

    fn next_candidates(&self, frame: &LabeledFrame) -> Option<Candidates> {
        if let Some(p) = frame.find_problems().into_iter().next() {
            let d = frame.find_deficiencies().into_iter().next();
            // Older worlds first; problems before deficiencies at a world.
            if d.as_ref().is_none_or(|d| d.x >= p.world) {
                return Some(eliminate_problem(frame, &p, self.logic));
            }
            return Some(eliminate_deficiency(frame, &d.expect("checked"), self.logic));
        }
        let d = frame.find_deficiencies().into_iter().next()?;
        Some(eliminate_deficiency(frame, &d, self.logic))
    }

    fn search(&mut self, frame: LabeledFrame) -> Result<Option<LabeledFrame>, Abort> {
        let mut stack: Vec<Candidates> = Vec::new();
        let mut frame = frame;
        loop {
            self.steps += 1;
            self.largest = self.largest.max(frame.len());
            if self.steps > self.budget.max_steps {
                return Err(Abort(format!("step limit {} reached", self.budget.max_steps)));
            }
            if let Some(obs) = self.observer.as_mut() {
                obs(&frame);
            }
            match self.next_candidates(&frame) {
                Some(c) => stack.push(c),
                None => return Ok(Some(frame)),
            }
            frame = loop {
                let Some(top) = stack.last_mut() else { return Ok(None) };
                let viability = &mut self.viability;
                match top.next_with(&mut |t| viability.viable(t)) {
                    Some(c) if c.len() > self.limit => self.capped = true,
                    Some(c) => break c,
                    None => {
                        stack.pop();
                        self.backtracks += 1;
                        if self.backtracks > self.budget.max_backtracks {
                            return Err(Abort(format!(
                                "backtrack limit {} reached",
                                self.budget.max_backtracks
                            )));
                        }
                    }
                }
            };
        }
    }
}
