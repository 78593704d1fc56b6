//! Admissible rules, essentially Δ1 and Σ1 formulas, self provers and
//! trivial self prover generators.

mod rules;
mod selfprover;
mod sigma;

use serde::Serialize;
use serde_json::{json, Value};

pub use rules::{check_rule, AdmissibleRule, RuleCheck, RuleError, Side};
pub use selfprover::{
    almost_loeb, canonical_modal_dnf, check_tsg_decomposition, dagger_check, is_self_prover,
    AlmostLoeb, AlmostLoebReport, DaggerReport, DecompositionReport, TsgDecomposition, TsgDisjunct,
};
pub use sigma::{
    classify_delta1, classify_sigma1, is_box_disjunction, is_tsg, sigma1_countermodel, Delta1,
    Delta1Report, Sigma1Countermodel, Sigma1Error, Sigma1Report,
};

use crate::decide::{derivable, Budget, Logic, Verdict};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn from_bool(b: Option<bool>) -> Self {
        match b {
            Some(true) => Answer::Yes,
            Some(false) => Answer::No,
            None => Answer::Unknown,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Answer::Yes => Some(true),
            Answer::No => Some(false),
            Answer::Unknown => None,
        }
    }
}

/// A derivability query together with its verdict.
#[derive(Clone, Debug)]
pub struct Query {
    pub formula: Formula,
    pub logic: Logic,
    pub verdict: Verdict,
}

impl Query {
    /// Decides `f` in ILM, which is conservative over GL.
    fn run(f: Formula, budget: &Budget) -> Query {
        let logic = Logic::Ilm;
        let verdict = derivable(logic, &f, budget).expect("ILM accepts every formula");
        Query { formula: f, logic, verdict }
    }

    pub fn holds(&self) -> Option<bool> {
        match &self.verdict {
            Verdict::Derivable(_) => Some(true),
            Verdict::Refuted(_) => Some(false),
            Verdict::Unknown(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.verdict.to_json();
        v["formula"] = json!(self.formula.to_string());
        v["logic"] = json!(self.logic);
        v
    }
}

fn and3(xs: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    let mut unknown = false;
    for x in xs {
        match x {
            Some(false) => return Some(false),
            None => unknown = true,
            Some(true) => {}
        }
    }
    if unknown {
        None
    } else {
        Some(true)
    }
}

fn or3(xs: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    and3(xs.into_iter().map(|x| x.map(|b| !b))).map(|b| !b)
}

fn implies3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    or3([a.map(|x| !x), b])
}

#[cfg(test)]
mod tests;
