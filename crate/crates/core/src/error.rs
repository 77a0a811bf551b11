use thiserror::Error;

/// Errors reported by the library.
///
/// Parsing problems are kept distinct (syntax, unknown generator, arity
/// mismatch) so that callers can report them separately.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{name}` at byte {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("arity mismatch for `{name}` at byte {pos}: expected {expected} children, found {found}")]
    ArityMismatch {
        name: String,
        pos: usize,
        expected: usize,
        found: usize,
    },
    #[error("arity {0} exceeds the supported maximum")]
    ArityTooLarge(usize),
    #[error("operation requires degree at least one")]
    DegreeZero,
    #[error("expected {expected} arguments, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("edges do not share a child")]
    EdgeChildMismatch,
    #[error("decoration words differ")]
    DecorationMismatch,
    #[error("connection word is not realizable: {0}")]
    NotRealizable(String),
    #[error("element ceiling of {0} exceeded")]
    CeilingExceeded(usize),
    #[error("term does not belong to the poset")]
    NotInPoset,
    #[error("terms are not comparable")]
    NotComparable,
    #[error("terms do not form a covering pair")]
    NotCovering,
    #[error("term is not fixed by the tilting map")]
    NotTilted,
    #[error("term is not fully tilted")]
    NotFullyTilted,
    #[error("elements are expressed in different bases")]
    BasisMismatch,
    #[error("not a leaning forest: {0}")]
    NotLeaning(String),
    #[error("sizes differ")]
    SizeMismatch,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numeric overflow")]
    Overflow,
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
