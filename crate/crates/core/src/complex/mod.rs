//! Explicit decompositions of complex tensors of format at most `3 x 3 x 3`
//! into at most five simple tensors.
//!
//! All thresholds are relative: a quantity counts as zero when it is below
//! the matching tolerance times the max-norm of the tensor being worked on.

pub mod d332;
pub mod d333;
pub mod jordan;
pub mod linalg;
pub mod pencil;
pub mod rank222;
pub mod verify;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{Decomposition, DenseTensor};

pub use d332::decompose_332;
pub use d333::{decompose_333, decompose_333_traced};
pub use jordan::{jordan_3x3, JordanForm};
pub use linalg::{numerical_rank, Svd};
pub use pencil::{singularize_slice, PencilRoot};
pub use rank222::{decompose_222, decompose_223, hyperdeterminant, is_superdiagonal, rank_222};
pub use verify::{relative_residual, verify};

/// Numerical tolerances, all relative to the scale of the input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Singular values below `rank_tol * scale` count as zero.
    pub rank_tol: f64,
    /// Eigenvalues closer than `eig_cluster_tol * scale` are merged.
    pub eig_cluster_tol: f64,
    /// Largest accepted relative residual of a decomposition.
    pub residual_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_tol: 1e-9,
            eig_cluster_tol: 1e-6,
            residual_tol: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, eig_cluster_tol: f64, residual_tol: f64) -> Result<Self> {
        let t = Tolerance {
            rank_tol,
            eig_cluster_tol,
            residual_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("eig_cluster_tol", self.eig_cluster_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }

    /// All three tolerances scaled by `factor`, capped below 1.
    pub fn scaled(&self, factor: f64) -> Self {
        let f = |v: f64| (v * factor).min(0.5);
        Tolerance {
            rank_tol: f(self.rank_tol),
            eig_cluster_tol: f(self.eig_cluster_tol),
            residual_tol: self.residual_tol,
        }
    }
}

/// Tolerances together with the reference scale of the current tensor.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ctx {
    pub tol: Tolerance,
    pub scale: f64,
}

impl Ctx {
    pub fn new(tol: Tolerance, t: &DenseTensor<Complex64>) -> Self {
        Ctx {
            tol,
            scale: t.max_norm(),
        }
    }

    /// Context for a tensor reached through a non-unitary change of basis.
    pub fn rescaled(&self, t: &DenseTensor<Complex64>) -> Self {
        Ctx {
            tol: self.tol,
            scale: t.max_norm(),
        }
    }

    pub fn with_scale_at_least(&self, floor: f64) -> Self {
        Ctx {
            tol: self.tol,
            scale: self.scale.max(floor),
        }
    }

    /// Entries at or below this size are zero.
    pub fn zero(&self) -> f64 {
        self.tol.rank_tol * self.scale
    }

    /// Pivots at or below this size are unusable.
    pub fn pivot(&self) -> f64 {
        self.tol.eig_cluster_tol * self.scale
    }

    pub fn rank(&self, m: &linalg::Mat) -> usize {
        linalg::rank_scaled(m, self.tol.rank_tol, self.scale)
    }

    pub fn is_zero(&self, t: &DenseTensor<Complex64>) -> bool {
        t.max_norm() <= self.zero()
    }
}

/// Decomposes a tensor of any format with every direction of size at most 3.
///
/// The tensor is padded with zeros into the smallest of `2 x 2 x 2`,
/// `3 x 3 x 2` (up to a permutation of directions) and `3 x 3 x 3` that
/// contains it; the terms are cut back to the original format.
pub fn decompose(
    t: &DenseTensor<Complex64>,
    tol: Tolerance,
) -> Result<Decomposition<Complex64>> {
    tol.validate()?;
    let dims = t.dims();
    let mut sorted = dims;
    sorted.sort_unstable();
    let container = if sorted[2] <= 2 {
        [2, 2, 2]
    } else if sorted[1] <= 2 {
        let short = (0..3).rev().find(|&d| dims[d] <= 2).expect("a short direction");
        let mut c = [3, 3, 3];
        c[short] = 2;
        c
    } else {
        [3, 3, 3]
    };
    if container == dims {
        return decompose_exact(t, tol);
    }
    let padded = DenseTensor::from_fn(container, |i, j, k| {
        if i < dims[0] && j < dims[1] && k < dims[2] {
            t.get(i, j, k)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let inner = decompose_exact(&padded, tol)?;
    let terms = linalg::prune(
        inner
            .terms
            .iter()
            .map(|term| linalg::resize_term(term, dims, [0; 3]))
            .collect(),
        0.0,
    );
    let mut out = Decomposition::new(dims, terms)?;
    out.residual = relative_residual(t, &out)?;
    Ok(out)
}

fn decompose_exact(
    t: &DenseTensor<Complex64>,
    tol: Tolerance,
) -> Result<Decomposition<Complex64>> {
    match t.dims() {
        [2, 2, 2] => decompose_222(t, tol),
        [3, 3, 3] => decompose_333(t, tol),
        [3, 3, 2] => decompose_332(t, tol),
        dims => {
            let short = (0..3).find(|&d| dims[d] == 2).expect("a 3 x 3 x 2 format");
            let perm = match short {
                0 => [1, 2, 0],
                _ => [0, 2, 1],
            };
            let moved = decompose_332(&t.permute_directions(perm), tol)?;
            let terms = moved
                .terms
                .into_iter()
                .map(|x| linalg::unpermute_term(x, perm))
                .collect();
            let mut out = Decomposition::new(dims, terms)?;
            out.residual = relative_residual(t, &out)?;
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::default().validate().is_ok());
        assert!(Tolerance::new(0.0, 1e-6, 1e-6).is_err());
        assert!(Tolerance::new(1e-9, f64::NAN, 1e-6).is_err());
        assert!(Tolerance::new(1e-9, 1e-6, 2.0).is_err());
    }
}
