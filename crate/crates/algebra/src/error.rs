use thiserror::Error;

/// Failures raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("scalars from different domains cannot be combined: {0}")]
    DomainMismatch(String),
    #[error("matrix has inconsistent dimensions: {0}")]
    DimensionMismatch(String),
    #[error("polynomial division is not exact")]
    NonExactDivision,
    #[error("point does not lie on the curve (residual {residual})")]
    NotOnCurve { residual: f64 },
    #[error("partial derivative in z vanishes at the point")]
    SingularPoint,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is constant and has no roots")]
    Constant,
    #[error("root refinement failed: {0}")]
    RefinementFailure(String),
}
