//! The two input languages: multimodal formulas and universal Horn frame theories.

mod error;
mod formula;
mod lexer;
mod parser;
mod theory;

pub use error::{ParseError, ParseErrorKind};
pub use formula::{subformulas, ModalFormula, RelIndex};
pub use parser::parse_formula;
pub use theory::{parse_theory, Atom, FrameTheory, HornClause, TheoryError, VarId};

/// Renders a formula in the grammar accepted by [`parse_formula`].
pub fn print_formula(formula: &ModalFormula) -> String {
    formula.to_string()
}

/// Renders a theory in the format accepted by [`parse_theory`].
pub fn print_theory(theory: &FrameTheory) -> String {
    theory.to_string()
}
