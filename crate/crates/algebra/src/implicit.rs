//! Implicit differentiation on plane curves `P(c, z) = 0`.

use crate::error::AlgebraError;
use crate::poly::BiPoly;
use crate::scalar::Field;

/// `dz/dc = -P_c / P_z` at `(c0, z0)`.
///
/// Exact domains require `P(c0, z0) == 0`; floating ones accept `|P| <= tol`.
pub fn implicit_derivative<F: Field>(
    p: &BiPoly<F>,
    c0: &F,
    z0: &F,
    tol: f64,
) -> Result<F, AlgebraError> {
    let v = p.eval_bi(c0, z0);
    let on_curve = if F::EXACT {
        v.is_zero()
    } else {
        v.magnitude() <= tol
    };
    if !on_curve {
        return Err(AlgebraError::NotOnCurve {
            residual: v.magnitude(),
        });
    }
    let pz = p.partial_z().eval_bi(c0, z0);
    if pz.is_negligible(1.0) {
        return Err(AlgebraError::SingularPoint);
    }
    let pc = p.partial_c().eval_bi(c0, z0);
    Ok(pc.neg().div(&pz))
}
