use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the model (non-finite phase,
    /// reflectance outside `[0, 1)`, negative intensity, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The call itself is malformed (empty stage list, degenerate grid, order 0).
    #[error("usage error: {0}")]
    Usage(String),
    /// A fringe measurement could not be resolved on the supplied table.
    #[error("unresolved: {0}")]
    Unresolved(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn unresolved(msg: impl Into<String>) -> Error {
    Error::Unresolved(msg.into())
}
