use std::fmt;

/// What went wrong while parsing a formula or a theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownOperator(String),
    ZeroRelationIndex,
    IndexExceedsSignature { index: usize, n: usize, m: usize },
    NonHorn(String),
    UnsafeHead(String),
    Equality,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownOperator(op) => write!(f, "unknown operator `{op}`"),
            ParseErrorKind::ZeroRelationIndex => write!(f, "relation index must be >= 1"),
            ParseErrorKind::IndexExceedsSignature { index, n, m } => {
                write!(f, "relation index {index} exceeds signature {n}+{m}")
            }
            ParseErrorKind::NonHorn(why) => write!(f, "not a Horn clause: {why}"),
            ParseErrorKind::UnsafeHead(var) => write!(
                f,
                "unsafe clause: head variable `{var}` does not occur in the body"
            ),
            ParseErrorKind::Equality => write!(f, "equality atoms are not supported"),
        }
    }
}

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}
