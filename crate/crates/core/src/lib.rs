//! Decision procedures, certified countermodels and classifiers for the
//! interpretability logics GL, IL and ILM.

pub mod classify;
pub mod construction;
pub mod corpus;
pub mod decide;
pub mod semantics;
pub mod theory;
pub mod syntax;

pub use semantics::{VeltmanFrame, VeltmanModel};
pub use syntax::{adequate_closure, fresh_atoms, parse, render, AdequateSet, Formula, ParseError};
