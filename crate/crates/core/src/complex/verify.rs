//! Residual of a decomposition against its target tensor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{Decomposition, DenseTensor};

/// `max|T - sum| / max|T|`, or the absolute max-norm of the sum when `T = 0`.
pub fn relative_residual(
    t: &DenseTensor<Complex64>,
    d: &Decomposition<Complex64>,
) -> Result<f64> {
    if d.target_dims != t.dims() {
        return Err(Error::DimensionMismatch {
            expected: t.dims(),
            found: d.target_dims,
        });
    }
    let diff = t.sub(&d.evaluate()?)?.max_norm();
    let scale = t.max_norm();
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

/// Residual check: `Ok(residual)` when it is within `residual_tol`.
pub fn verify(
    t: &DenseTensor<Complex64>,
    d: &Decomposition<Complex64>,
    residual_tol: f64,
) -> Result<f64> {
    let r = relative_residual(t, d)?;
    if r <= residual_tol {
        Ok(r)
    } else {
        Err(Error::Diagnostic {
            case: "verification".into(),
            residual: r,
        })
    }
}
