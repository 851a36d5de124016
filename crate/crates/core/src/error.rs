use thiserror::Error;

use crate::exactlin::ExactError;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure of an A∞ or functor equation at a specific input tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport {
    pub relation: String,
    pub arity: usize,
    pub tuple: Vec<String>,
    pub residual: String,
}

impl std::fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} fails at arity {} on ({}): residual {}",
            self.relation,
            self.arity,
            self.tuple.join(", "),
            self.residual
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("structure is not minimal: {0}")]
    NotMinimal(String),
    #[error("vector field is not pure: {0}")]
    NotPure(String),
    #[error("no nc-vector field satisfies the constraints: {0}")]
    NoSolution(String),
    #[error("stage {stage} needs to divide by 1 - {stage}, which vanishes in characteristic {characteristic}")]
    CharacteristicObstruction { stage: usize, characteristic: u64 },
    #[error("weights cannot be shifted to degrees: {0}")]
    Unshiftable(String),
    #[error("{0}")]
    Violation(ViolationReport),
    #[error("format error: {0}")]
    Format(String),
}

impl From<ViolationReport> for Error {
    fn from(r: ViolationReport) -> Self {
        Error::Violation(r)
    }
}

impl Error {
    /// Process exit code for the command-line driver; distinct per failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Format(_) => 2,
            Error::Exact(ExactError::Parse(_) | ExactError::Invalid(_)) => 2,
            Error::NotMinimal(_) => 3,
            Error::NotPure(_) => 4,
            Error::CharacteristicObstruction { .. } => 5,
            Error::Exact(ExactError::EigenvaluesOutsideField { .. }) => 6,
            Error::Unshiftable(_) => 7,
            Error::NoSolution(_) => 8,
            Error::Violation(_) => 9,
            Error::Exact(_) => 10,
        }
    }
}
