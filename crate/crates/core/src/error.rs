use thiserror::Error;

/// Errors reported by the analysis, design and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Structurally invalid parameters (e.g. `a > N`, empty codebook).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// No parameter choice satisfies the constraints.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// An explicit codebook would exceed the word-count guard.
    #[error("codebook of {words} words exceeds the memory guard of {limit} words")]
    MemoryGuard { words: String, limit: u64 },
    /// A user cost model failed the monotonicity spot-check.
    #[error("cost model is not monotone: {0}")]
    NonMonotoneCost(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParams(msg.into()))
}
