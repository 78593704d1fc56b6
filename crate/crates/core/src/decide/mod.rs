//! Satisfiability, derivability and countermodels for GL, IL and ILM, and
//! a checker for Hilbert-style proofs.

mod engine;
mod proof;
mod viability;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

pub use engine::{BudgetReport, Engine, SatResult};
pub use proof::{check_proof, recognize_axiom, Proof, ProofError, ProofLine, Rule};
pub use crate::theory::Logic;

use crate::semantics::VeltmanModel;
use crate::syntax::Formula;
use crate::theory::DTheory;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_worlds: usize,
    pub max_steps: usize,
    pub max_backtracks: usize,
    /// Cap on theories examined by the viability pruning.
    pub max_viability: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_worlds: 64,
            max_steps: 20_000,
            max_backtracks: 20_000,
            max_viability: 5_000_000,
        }
    }
}

/// A finite model and a world; `labels` holds the theories the search
/// assigned, for re-checking the truth lemma.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub model: VeltmanModel,
    pub world: String,
    pub labels: Option<BTreeMap<String, DTheory>>,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.model.to_json();
        v["root"] = json!(self.world);
        v
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Derivable(Option<Proof>),
    Refuted(Certificate),
    Unknown(BudgetReport),
}

impl Verdict {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Verdict::Derivable(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Derivable(_) => "derivable",
            Verdict::Refuted(_) => "refuted",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Refuted(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Derivable(p) => json!({
                "verdict": "derivable",
                "proof": p.as_ref().map(|p| p.to_string()),
            }),
            Verdict::Refuted(c) => json!({
                "verdict": "refuted",
                "countermodel": c.to_json(),
            }),
            Verdict::Unknown(r) => json!({
                "verdict": "unknown",
                "budget": r,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("GL formulas may not contain |>: `{0}`")]
    RhdInGl(Formula),
    #[error("verdict is {0}, not refuted")]
    NotRefuted(&'static str),
}

fn gl_check(logic: Logic, f: &Formula) -> Result<(), DecideError> {
    if logic == Logic::Gl && f.has_rhd() {
        return Err(DecideError::RhdInGl(f.clone()));
    }
    Ok(())
}

/// Searches for a certified model of `f`.
pub fn satisfiable(logic: Logic, f: &Formula, budget: &Budget) -> Result<SatResult, DecideError> {
    gl_check(logic, f)?;
    Ok(match Engine::new(logic, f, budget) {
        Ok(mut e) => e.satisfy(f),
        Err(err) => SatResult::Exhausted(BudgetReport {
            reason: err.to_string(),
            steps: 0,
            backtracks: 0,
            largest_frame: 0,
        }),
    })
}

/// `Derivable` when `~f` has no model, `Refuted` with a certified
/// countermodel otherwise.
pub fn derivable(logic: Logic, f: &Formula, budget: &Budget) -> Result<Verdict, DecideError> {
    gl_check(logic, f)?;
    let neg = Formula::not(f.clone());
    Ok(match satisfiable(logic, &neg, budget)? {
        SatResult::Certificate(c) => Verdict::Refuted(c),
        SatResult::Unsat => Verdict::Derivable(Proof::trivial(f, logic)),
        SatResult::Exhausted(r) => Verdict::Unknown(r),
    })
}

/// The countermodel of a refuted formula.
pub fn countermodel(logic: Logic, f: &Formula, budget: &Budget) -> Result<Certificate, DecideError> {
    match derivable(logic, f, budget)? {
        Verdict::Refuted(c) => Ok(c),
        v => Err(DecideError::NotRefuted(v.name())),
    }
}
