use thiserror::Error;

/// Errors raised by the p-adic and arithmetic layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("{0} is not a square modulo {1}: p does not split")]
    NonResidue(String, u64),
    #[error("p-adic context mismatch: {0}")]
    ContextMismatch(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("functional-equation symmetry violated: {0}")]
    SymmetryViolated(String),
    #[error("catalog error: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
