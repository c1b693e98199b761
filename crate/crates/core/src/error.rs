use thiserror::Error;

/// Failures raised by the computation routes.
///
/// Everything except [`Error::InvariantBreach`] means the caller asked for
/// something outside the model; a breach means an internal identity that
/// must hold (integrality, divisibility, degree support) did not.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("variable rosters do not match: {left} vs {right}")]
    RosterMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("quantum classes live over different projective spaces (r={left} vs r={right})")]
    RankMismatch { left: u32, right: u32 },

    #[error("excess class out of model: t={t} is below g={g}")]
    OutOfModel { t: i64, g: u32 },

    #[error("internal invariant breach: {0}")]
    InvariantBreach(String),
}

impl Error {
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::InvariantBreach(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn breach(msg: impl Into<String>) -> Self {
        Error::InvariantBreach(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
