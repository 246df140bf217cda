//! Elementary multimodal logic over universal Horn frame theories.
//!
//! - [`syntax`]: formulas and Horn theories, with parsers and printers.
//! - [`semantics`]: Kripke structures, model checking, world types and frame conditions.
//! - [`chase`]: least closure of a frame under a Horn theory, with provenance.
//! - [`constructions`]: the theories Φ/Φ′, grid models, domino reductions, pruning.
//! - [`solver`]: bounded finite-model search with two engines and a certifier.

pub mod chase;
pub mod constructions;
pub mod semantics;
pub mod solver;
pub mod syntax;

pub use syntax::{parse_formula, parse_theory, FrameTheory, HornClause, ModalFormula};
