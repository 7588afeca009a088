//! Sylvester resultants.

use crate::error::AlgebraError;
use crate::matrix::ExactMatrix;
use crate::poly::Poly;
use crate::scalar::Ring;

/// Sylvester matrix of `p` and `q` read as polynomials of formal degrees `dp`
/// and `dq`, so a vanishing leading coefficient is allowed. This is what makes
/// the resultant of two homogeneous forms (and hence common zeros at infinity)
/// visible.
pub fn sylvester_matrix<R: Ring>(
    p: &Poly<R>,
    dp: usize,
    q: &Poly<R>,
    dq: usize,
) -> Result<ExactMatrix<R>, AlgebraError> {
    if p.degree().is_some_and(|d| d > dp) || q.degree().is_some_and(|d| d > dq) {
        return Err(AlgebraError::DimensionMismatch(
            "declared degree below actual degree".into(),
        ));
    }
    let n = dp + dq;
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..dq {
        for k in 0..=dp {
            m.set(i, i + k, p.coeff(dp - k));
        }
    }
    for i in 0..dp {
        for k in 0..=dq {
            m.set(dq + i, i + k, q.coeff(dq - k));
        }
    }
    Ok(m)
}

/// Resultant for the formal degrees `dp`, `dq`.
pub fn resultant_with_degrees<R: Ring>(
    p: &Poly<R>,
    dp: usize,
    q: &Poly<R>,
    dq: usize,
) -> Result<R, AlgebraError> {
    sylvester_matrix(p, dp, q, dq)?.determinant()
}

/// Resultant for the actual degrees. Zero if either polynomial is zero.
pub fn resultant<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Result<R, AlgebraError> {
    match (p.degree(), q.degree()) {
        (Some(dp), Some(dq)) => resultant_with_degrees(p, dp, q, dq),
        _ => Ok(R::zero()),
    }
}
