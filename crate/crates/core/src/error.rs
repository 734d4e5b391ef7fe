use thiserror::Error;

/// Errors raised by builders, solvers and the extension engine.
///
/// Verification failures are not errors; they are reported through
/// [`crate::coloring::VerificationReport`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("structural precondition failed: {0}")]
    Structural(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A caller-supplied peel coloring broke one of the merge hypotheses.
    #[error("merge hypothesis violated ({clause}): {detail}")]
    Hypothesis {
        clause: &'static str,
        detail: String,
    },

    /// A guarantee that should hold by construction did not; indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),

    /// A complete search showed that no suitable coloring exists.
    #[error("no coloring exists: {0}")]
    Refuted(String),

    #[error("search budget exhausted")]
    Budget,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
