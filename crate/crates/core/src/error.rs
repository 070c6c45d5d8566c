use thiserror::Error;

/// Errors produced by the census library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input describes a manifold family this library does not classify.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// Seifert invariants that violate one or more normalization constraints.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// A matrix that must be invertible over the rationals is singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// The orbit state space exceeds the configured cap.
    #[error("state space has {size} states, above the cap of {cap}; try a smaller instance or raise SEIFERT_CENSUS_CAP")]
    Resource { size: u128, cap: u128 },

    /// Malformed textual or JSON input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
