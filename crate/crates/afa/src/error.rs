//! Error type shared across the library.

use std::fmt;

/// Everything that can go wrong when parsing input or running a decision
/// procedure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed source text (signature, term, problem file, or formula).
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A symbol was declared twice in a signature.
    #[error("duplicate symbol `{0}` in signature")]
    DuplicateSymbol(String),
    /// A signature without constants generates the empty algebra.
    #[error("signature declares no constants")]
    NoConstants,
    /// A term or formula mentions a symbol the signature does not declare.
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    /// A symbol was applied to the wrong number of arguments.
    #[error("symbol `{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    /// Input continued after a complete term.
    #[error("trailing input `{0}`")]
    TrailingInput(String),
    /// A position that does not exist in the tree of the given term.
    #[error("position `{position}` does not exist in `{term}`")]
    InvalidPosition { position: String, term: String },
    /// Two presentations (or a presentation and a query term) disagree on the
    /// signature.
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    /// `enumerate_if_finite` was called on an infinite algebra.
    #[error("the algebra is not finite")]
    NotFinite,
    /// The quantifier elimination node budget ran out before an answer was
    /// reached. This is a resource report, never a truth value.
    #[error("rewrite budget exhausted after {spent} nodes (limit {limit})")]
    BudgetExhausted { spent: u64, limit: u64 },
    /// A free variable had no value during evaluation.
    #[error("unassigned variable `{0}`")]
    UnassignedVariable(String),
    /// `decide_sentence` needs a closed formula.
    #[error("formula is not a sentence; free variables: {0}")]
    FreeVariables(String),
    /// `to_standard` accepts only formulas built from quantifier-free parts,
    /// conjunction, disjunction and existential quantifiers.
    #[error("formula is not existential-positive: {0}")]
    NotExistentialPositive(String),
    /// A bracketed literal `[t]` did not denote an element of the partial
    /// algebra.
    #[error("term `{0}` does not name an element of the partial algebra")]
    NotAnElement(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }

    /// Machine-readable error kind, used by the CLI's JSON mode.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::DuplicateSymbol(_) => "duplicate-symbol",
            Error::NoConstants => "no-constant",
            Error::UnknownSymbol(_) => "unknown-symbol",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::TrailingInput(_) => "trailing-input",
            Error::InvalidPosition { .. } => "invalid-position",
            Error::SignatureMismatch(_) => "signature-mismatch",
            Error::NotFinite => "not-finite",
            Error::BudgetExhausted { .. } => "budget-exhausted",
            Error::UnassignedVariable(_) => "unassigned-variable",
            Error::FreeVariables(_) => "free-variables",
            Error::NotExistentialPositive(_) => "not-existential-positive",
            Error::NotAnElement(_) => "not-an-element",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
