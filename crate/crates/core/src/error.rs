use thiserror::Error;

/// Errors raised by state construction and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The inputs are well formed but the requested computation has no answer
    /// (e.g. a family that does not bracket an entanglement transition).
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds the dense-simulation qubit cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The operation exists but not for this input shape.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A matrix failed one of the density-matrix invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
