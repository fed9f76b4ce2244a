//! First-order syntax: vocabularies, terms, formulas, and the ASCII parser
//! and printer.

mod parser;
mod syntax;
mod vocab;

pub use parser::{parse_formula, parse_sentence, parse_sentences, parse_term, Position};
pub use syntax::{Formula, Sentence, Term};
pub use vocab::{is_identifier, SymbolKind, Vocabulary};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at {position}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        position: Position,
        found: String,
        expected: Vec<String>,
    },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{name}` is not a {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("free variable `{0}` in sentence")]
    FreeVariable(String),
    #[error("quantified variable `{name}` at {position} shadows a declared symbol")]
    ShadowedSymbol { name: String, position: Position },
    #[error("`{0}` is reserved")]
    ReservedSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    BadSymbolName(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("function `{0}` must have arity >= 1 (use a constant)")]
    NullaryFunction(String),
    #[error("substituted term `{0}` is not ground")]
    NonGroundSubstitution(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<LogicError>,
    },
}

impl LogicError {
    /// Re-anchors an error from a one-line parse to a line of a larger file.
    pub(crate) fn at_line(self, line: usize) -> LogicError {
        match self {
            LogicError::Syntax {
                position,
                found,
                expected,
            } => LogicError::Syntax {
                position: Position {
                    line: line + position.line - 1,
                    column: position.column,
                },
                found,
                expected,
            },
            other => LogicError::AtLine {
                line,
                source: Box::new(other),
            },
        }
    }
}
