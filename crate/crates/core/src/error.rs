//! Error types shared across the crate.

use thiserror::Error;

/// Failure to parse a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("not an integer: {0:?}")]
    BadInteger(String),
    #[error("denominator must be zero-free: p/0 is undefined")]
    ZeroDenominator,
    #[error("denominator must be an unsigned positive integer, got {0:?}")]
    SignedDenominator(String),
}

/// Failure to read a game or strategy file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// JSON syntax or data error, with 1-based position from the parser.
    #[error("{message} at line {line}, column {column}")]
    Json { message: String, line: usize, column: usize },
    /// Structurally valid JSON that violates the game format.
    #[error("invalid game: {0}")]
    Structure(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json { message: e.to_string(), line: e.line(), column: e.column() }
    }
}

/// Shape violations: vector/matrix dimensions that do not line up.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("index {index} out of range for {n} strategies")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{0}")]
    Other(String),
}

/// A probability vector that is not one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("strategy entry {index} is negative: {value}")]
    Negative { index: usize, value: String },
    #[error("strategy entries sum to {sum}, expected 1")]
    BadSum { sum: String },
    #[error("strategy must have at least one entry")]
    Empty,
}
