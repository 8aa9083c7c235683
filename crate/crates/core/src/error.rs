use std::path::PathBuf;

use crate::dynamics::StabilityVerdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One violated parameter invariant, keyed by the config field name.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldViolation {
    pub field: &'static str,
    pub reason: String,
}

impl std::fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<FieldViolation>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("drift matrix is not stable (max real part {:.3e})", .0.max_real_part)]
    Unstable(Box<StabilityVerdict>),

    #[error("every sweep point is unstable ({points} points)")]
    AllUnstable { points: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unphysical covariance: {0}")]
    Unphysical(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn join(v: &[FieldViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// Process exit code: 1 for input problems, 2 for numerical/stability failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::Domain(_) | Error::Config(_) | Error::Io { .. } => 1,
            Error::Unstable(_)
            | Error::AllUnstable { .. }
            | Error::Numerical(_)
            | Error::Unphysical(_) => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
