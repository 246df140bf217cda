//! Kripke structures, local and global model checking, world types, and
//! evaluation of Horn frame conditions over finite frames.

mod check;
pub(crate) mod frame;
mod structure;

pub use check::{check_global, check_local, type_of, Evaluation, TypeSet};
pub use frame::{check_frame_condition, check_transitive, FrameCheck, Violation};
pub use structure::{KripkeStructure, WorldId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("relation index {index} out of range (structure has {count} relations)")]
    RelationOutOfRange { index: usize, count: usize },
    #[error("malformed structure file: {0}")]
    Format(String),
}
