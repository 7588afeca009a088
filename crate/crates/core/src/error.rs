use preper_algebra::AlgebraError;
use thiserror::Error;

/// Failures raised by the dynamics layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("numerator and denominator share a common zero on the projective line")]
    DegenerateMap,
    #[error("(0:0) is not a point of the projective line")]
    InvalidPoint,
    #[error("points do not form a cycle of the map")]
    NotACycle,
    #[error("degree {degree}^{n} exceeds the root-count budget of {limit}")]
    BudgetExceeded { degree: usize, n: usize, limit: u64 },
    #[error("point {point} lies on a cycle that is not repelling")]
    NotRepelling { point: String },
    #[error("defining curve is singular at a marked point")]
    SingularConfiguration,
    #[error("degree {0} is outside the supported range")]
    DegreeOutOfRange(usize),
    #[error("parameter value makes the family degenerate: {0}")]
    DegenerateParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type DynResult<T> = Result<T, DynError>;
