//! Roots of `det(A + t N)` for `3 x 3` pencils.
//!
//! Coefficients come from sampling the determinant on a circle and an
//! inverse DFT, roots from the eigenvalues of the companion matrix followed
//! by Newton polishing.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::linalg::{c, spectral_norm, svd, Mat, C, ZERO};
use crate::error::{Error, Result};

/// A value `lambda` with `det(A - lambda C) = 0`. `degenerate` marks a
/// determinant that vanishes identically, in which case `lambda = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilRoot {
    pub lambda: C,
    pub degenerate: bool,
}

pub fn det3(m: &Mat) -> C {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

fn det(m: &Mat) -> C {
    match m.nrows() {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => det3(m),
        _ => m.determinant(),
    }
}

/// Polynomial `det(a + t n)` in `t`, lowest degree first, together with the
/// coefficients scaled to `|t| ~ s` and the sampling radius `s`.
pub struct PencilPolynomial {
    pub coeffs: Vec<C>,
    pub radius: f64,
    /// `|coeffs[j]| s^j`, comparable across degrees.
    pub weights: Vec<f64>,
}

pub fn pencil_polynomial(a: &Mat, n: &Mat) -> PencilPolynomial {
    let size = a.nrows();
    let na = spectral_norm(a);
    let nn = spectral_norm(n);
    let radius = if na > 0.0 && nn > 0.0 { na / nn } else { 1.0 };
    let points = size + 1;
    let samples: Vec<C> = (0..points)
        .map(|k| {
            let t = C::from_polar(radius, 2.0 * PI * k as f64 / points as f64);
            det(&(a + n * t))
        })
        .collect();
    let mut coeffs = Vec::with_capacity(points);
    let mut weights = Vec::with_capacity(points);
    for j in 0..points {
        let mut acc = ZERO;
        for (k, s) in samples.iter().enumerate() {
            acc += s * C::from_polar(1.0, -2.0 * PI * (j * k) as f64 / points as f64);
        }
        let scaled = acc / c(points as f64);
        weights.push(scaled.norm());
        coeffs.push(scaled / c(radius.powi(j as i32)));
    }
    PencilPolynomial {
        coeffs,
        radius,
        weights,
    }
}

impl PencilPolynomial {
    pub fn eval(&self, t: C) -> C {
        self.coeffs.iter().rev().fold(ZERO, |acc, &x| acc * t + x)
    }

    fn derivative(&self, t: C) -> C {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(ZERO, |acc, (j, &x)| acc * t + x * c(j as f64))
    }

    /// Degree after dropping leading coefficients whose weight is at most
    /// `tol` times `reference`.
    pub fn degree(&self, tol: f64, reference: f64) -> usize {
        (0..self.coeffs.len())
            .rev()
            .find(|&j| self.weights[j] > tol * reference)
            .unwrap_or(0)
    }

    /// Roots of the polynomial truncated to `degree`, polished by Newton
    /// steps on the full polynomial.
    pub fn roots(&self, degree: usize) -> Vec<C> {
        if degree == 0 {
            return Vec::new();
        }
        // Companion matrix of the monic polynomial in u = t / radius.
        let lead = self.coeffs[degree] * c(self.radius.powi(degree as i32));
        let mut comp = DMatrix::<C>::zeros(degree, degree);
        for j in 0..degree {
            let cj = self.coeffs[j] * c(self.radius.powi(j as i32));
            comp[(0, degree - 1 - j)] = -cj / lead;
        }
        for i in 1..degree {
            comp[(i, i - 1)] = c(1.0);
        }
        let eig = comp
            .clone()
            .schur()
            .eigenvalues()
            .expect("complex Schur form has eigenvalues");
        eig.iter()
            .map(|&u| {
                let mut t = u * c(self.radius);
                for _ in 0..4 {
                    let d = self.derivative(t);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = self.eval(t) / d;
                    if !step.re.is_finite() || !step.im.is_finite() {
                        break;
                    }
                    let next = t - step;
                    if self.eval(next).norm() < self.eval(t).norm() {
                        t = next;
                    } else {
                        break;
                    }
                }
                t
            })
            .collect()
    }
}

/// Finds `lambda` with `rank(A - lambda C) <= 2`, preferring the root of
/// smallest modulus. `A` already singular gives `lambda = 0`.
///
/// Fails with [`Error::DegeneratePencil`] when `det(A - t C)` is a nonzero
/// constant.
pub fn singularize_slice(a: &Mat, cm: &Mat, rank_tol: f64) -> Result<PencilRoot> {
    if a.shape() != (3, 3) || cm.shape() != (3, 3) {
        return Err(Error::Precondition("pencil slices must be 3 x 3".into()));
    }
    let scale = spectral_norm(a).max(spectral_norm(cm));
    if scale == 0.0 {
        return Ok(PencilRoot {
            lambda: ZERO,
            degenerate: true,
        });
    }
    if super::linalg::rank_scaled(a, rank_tol, scale) <= 2 {
        return Ok(PencilRoot {
            lambda: ZERO,
            degenerate: false,
        });
    }
    let poly = pencil_polynomial(a, &-cm);
    let reference = scale.powi(3);
    let degree = poly.degree(rank_tol, reference);
    if degree == 0 {
        return if poly.weights[0] > rank_tol * reference {
            Err(Error::DegeneratePencil)
        } else {
            Ok(PencilRoot {
                lambda: ZERO,
                degenerate: true,
            })
        };
    }
    let roots = poly.roots(degree);
    // Rounding splits a multiple root by about eps^(1/k); the mean of the
    // split copies is accurate again.
    let close = |x: C, y: C| (x - y).norm() <= 1e-3 * (poly.radius + y.norm());
    let mut candidates = roots.clone();
    for (i, &r) in roots.iter().enumerate() {
        if roots[..i].iter().any(|&s| close(s, r)) {
            continue;
        }
        let near: Vec<C> = roots.iter().copied().filter(|&s| close(s, r)).collect();
        if near.len() > 1 {
            candidates.push(near.iter().sum::<C>() / c(near.len() as f64));
        }
    }
    let sigma_min = |l: C| svd(&(a - cm * l)).s[2];
    let scored: Vec<(C, f64)> = candidates.into_iter().map(|l| (l, sigma_min(l))).collect();
    let accepted = scored
        .iter()
        .filter(|x| x.1 <= rank_tol * scale)
        .min_by(|x, y| x.0.norm().total_cmp(&y.0.norm()));
    let lambda = accepted
        .or_else(|| scored.iter().min_by(|x, y| x.1.total_cmp(&y.1)))
        .map(|x| x.0)
        .expect("positive degree has roots");
    Ok(PencilRoot {
        lambda,
        degenerate: false,
    })
}
