//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A circuit parameter violates its validity rule.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },

    /// A configuration file used a key outside the fixed key set.
    #[error("unknown configuration key `{key}`")]
    UnknownKey { key: String },

    /// A required configuration key was absent.
    #[error("missing configuration key `{key}`")]
    MissingKey { key: String },

    /// Malformed configuration input.
    #[error("configuration line {line}: {message}")]
    Config { line: usize, message: String },

    /// A quantity string could not be parsed.
    #[error("cannot parse quantity `{text}`: {message}")]
    Quantity { text: String, message: String },

    /// An argument is outside the mathematical domain of an operation.
    #[error("{quantity} out of domain: {message}")]
    Domain {
        quantity: &'static str,
        message: String,
    },

    /// A bracketed root search did not converge.
    #[error("root search failed in bracket [{lo}, {hi}] after {iterations} iterations")]
    RootSearch { lo: f64, hi: f64, iterations: usize },

    /// An iterative solver did not converge.
    #[error("{what} did not converge (last iterate {last})")]
    NonConvergence { what: &'static str, last: f64 },

    /// Eigenvalue computation failed.
    #[error("eigenvalue solver: {message}")]
    Eigen { message: String },

    /// An internal cross-check failed; indicates a numerical defect.
    #[error("consistency check failed: {message}")]
    Consistency { message: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
