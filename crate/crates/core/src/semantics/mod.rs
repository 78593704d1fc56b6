//! Finite Veltman frames and models.

mod closure;
mod eval;
mod frame;
mod glue;

pub use closure::{IndexedFrame, Imperfection, MAX_WORLDS};
pub(crate) use closure::{bit, bits, transitive};
pub use eval::{
    forces, frame_validates, frame_validates_with_limit, generated_submodel, truth_set,
    VALUATION_LIMIT,
};
pub use frame::{validate_il, validate_ilm, SemanticsError, VeltmanFrame, VeltmanModel, Violation};
pub use glue::{glue_above_world, glue_root, glue_selfprover, Glued};

#[cfg(test)]
pub(crate) mod testutil;
