//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Group construction rejected (empty order list, zero order, ...).
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    /// Group order exceeds the configured cap on dense-matrix sizes.
    #[error("group order {order} exceeds size cap {cap}")]
    SizeCap { order: usize, cap: usize },

    /// Element or character does not belong to the group at hand.
    #[error("invalid element: {0}")]
    InvalidElement(String),

    /// Shape or group mismatch between operands.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Exponent outside the domain of the requested norm or inequality.
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    /// Weight field or weight sequence with nonpositive entries.
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    /// Malformed configuration (unknown suite, bad grid, unparsable spec).
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A numerical backend failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
