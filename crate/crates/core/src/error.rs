use thiserror::Error;

/// Errors raised by the automaton, Hankel and operator routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed arguments: bad shapes, out-of-range symbols, invalid bounds.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The input is well formed but degenerate for the requested operation
    /// (non-minimal automaton, rank-deficient request).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A numerical routine did not converge or hit a singular system.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// A power series diverges: the relevant spectral radius is at least 1.
    #[error("spectral radius {rho} >= 1, series diverge")]
    Divergent { rho: f64 },

    /// A shift would push support past the truncation degree.
    #[error("truncation: support reaches degree {degree}, shift needs headroom")]
    Truncation { degree: usize },

    /// Refused to allocate an oversized block.
    #[error("block of {entries} entries exceeds the limit of {limit}")]
    TooLarge { entries: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
