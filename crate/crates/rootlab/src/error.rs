//! Crate-wide error type.

use std::fmt;

/// Errors raised across the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A polynomial outside the supported degree range {2,3,4,5}.
    InvalidDegree(usize),
    /// Coefficient vector inconsistent with the declared degree or with a
    /// zero leading coefficient.
    BadCoefficients(String),
    /// Division by the zero polynomial.
    ZeroDivisor,
    /// An operation received the zero polynomial where it is undefined.
    ZeroPolynomial,
    /// Root finding did not meet the residual contract within the iteration
    /// budget; carries the best normalized residual reached.
    RootsDidNotConverge { residual: f64 },
    /// Training diverged (non-finite loss).
    Diverged(String),
    /// Unknown feature family name.
    UnknownFamily(String),
    /// A requested feature column is absent from the dataset.
    UnknownFeature(String),
    /// Dataset shape or content violates an operation's preconditions.
    BadData(String),
    /// Malformed CSV input; names the offending row/column where known.
    Csv(String),
    /// I/O failure wrapped with context.
    Io(String),
    /// Model (de)serialization failure.
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDegree(d) => write!(f, "unsupported polynomial degree {d} (expected 2..=5)"),
            Error::BadCoefficients(msg) => write!(f, "bad coefficients: {msg}"),
            Error::ZeroDivisor => write!(f, "polynomial division by zero polynomial"),
            Error::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            Error::RootsDidNotConverge { residual } => {
                write!(f, "root finding exceeded the iteration budget (best residual {residual:.3e})")
            }
            Error::Diverged(msg) => write!(f, "training diverged: {msg}"),
            Error::UnknownFamily(name) => write!(f, "unknown feature family '{name}'"),
            Error::UnknownFeature(name) => write!(f, "unknown feature column '{name}'"),
            Error::BadData(msg) => write!(f, "bad data: {msg}"),
            Error::Csv(msg) => write!(f, "csv error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
            Error::Serde(msg) => write!(f, "serialization error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
