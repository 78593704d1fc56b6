//! Labeled frames and the step-by-step model construction: cones,
//! problems and deficiencies, closure, invariants and the truth lemma.

mod eliminate;
mod frame;

pub use eliminate::{eliminate_deficiency, eliminate_problem, Candidates};
pub use frame::{
    check_mcone_invariance, verify_truth_lemma, Deficiency, InvariantViolation, LabeledFrame,
    Problem,
};
pub use crate::semantics::Imperfection;
