//! Jordan normal form of `3 x 3` complex matrices.

use super::linalg::{c, condition, right_singular_basis, spectral_norm, Mat, Vector, C};
use crate::error::{Error, Result};

/// `m = e j e^-1` with `j` in Jordan form.
#[derive(Clone, Debug)]
pub struct JordanForm {
    pub e: Mat,
    pub j: Mat,
    /// `(start, size, eigenvalue)` of each block, in order along the diagonal.
    pub blocks: Vec<(usize, usize, C)>,
}

impl JordanForm {
    /// Number of nonzero superdiagonal entries of `j`.
    pub fn superdiagonal_count(&self) -> usize {
        self.blocks.iter().map(|b| b.1 - 1).sum()
    }

    /// Max-norm of `m e - e j`, relative to `|m|`.
    pub fn residual(&self, m: &Mat) -> f64 {
        let d = m * &self.e - &self.e * &self.j;
        let s = spectral_norm(m).max(f64::MIN_POSITIVE);
        d.iter().map(|x| x.norm()).fold(0.0, f64::max) / s
    }
}

/// Eigenvalues closer than `eig_cluster_tol * |m|` form one cluster; block
/// structure inside a cluster comes from numerical nullities of powers of
/// `m - lambda I`, measured with the same threshold.
///
/// Rounding splits a defective eigenvalue of multiplicity `k` by about
/// `eps^(1/k)`, so when the basis comes out ill-conditioned the cluster
/// threshold is widened tenfold, up to four times, and the result is kept only
/// if `m e - e j` stays below the widened threshold.
///
/// Fails with [`Error::IllConditioned`] when every basis has condition number
/// above `1 / rank_tol`.
pub fn jordan_3x3(m: &Mat, eig_cluster_tol: f64, rank_tol: f64) -> Result<JordanForm> {
    if m.shape() != (3, 3) {
        return Err(Error::Precondition("Jordan form needs a 3 x 3 matrix".into()));
    }
    let mut last = None;
    let mut widen = 1.0;
    for _ in 0..5 {
        let tol = (eig_cluster_tol * widen).min(0.1);
        match attempt(m, tol, rank_tol) {
            Ok(f) if f.residual(m) <= tol => return Ok(f),
            Ok(_) => {}
            Err(e) => last = Some(e),
        }
        widen *= 10.0;
    }
    Err(last.unwrap_or(Error::IllConditioned {
        what: "Jordan basis",
        cond: f64::INFINITY,
    }))
}

fn attempt(m: &Mat, eig_cluster_tol: f64, rank_tol: f64) -> Result<JordanForm> {
    let norm = spectral_norm(m);
    if norm == 0.0 {
        return Ok(JordanForm {
            e: Mat::identity(3, 3),
            j: Mat::zeros(3, 3),
            blocks: (0..3).map(|i| (i, 1, C::new(0.0, 0.0))).collect(),
        });
    }
    let eig = m
        .clone()
        .schur()
        .eigenvalues()
        .ok_or(Error::IllConditioned {
            what: "Schur form",
            cond: f64::INFINITY,
        })?;
    let thr = eig_cluster_tol * norm;
    let clusters = cluster(eig.as_slice(), thr);

    let mut columns: Vec<Vector> = Vec::with_capacity(3);
    let mut blocks = Vec::new();
    for (lambda, mult) in clusters {
        let n = m - Mat::identity(3, 3) * lambda;
        let (s, v) = right_singular_basis(&n);
        let nullity = s.iter().filter(|&&x| x <= thr).count().clamp(1, mult);
        if mult == 1 || nullity == mult {
            // Diagonalizable part: the `mult` least significant directions.
            for i in 0..mult {
                blocks.push((columns.len(), 1, lambda));
                columns.push(v.column(2 - i).into_owned());
            }
            continue;
        }
        let start = columns.len();
        match (mult, nullity) {
            (2, 1) => {
                let (_, w) = right_singular_basis(&(&n * &n));
                let kernel = v.column(2).into_owned();
                let top = best_complement(&[w.column(1).into_owned(), w.column(2).into_owned()], &kernel);
                let v1 = &n * &top;
                columns.push(v1);
                columns.push(top);
                blocks.push((start, 2, lambda));
            }
            (3, 1) => {
                let n2 = &n * &n;
                let (_, w) = right_singular_basis(&n2);
                let v3 = w.column(0).into_owned();
                let v2 = &n * &v3;
                let v1 = &n * &v2;
                columns.extend([v1, v2, v3]);
                blocks.push((start, 3, lambda));
            }
            (3, 2) => {
                let v2 = v.column(0).into_owned();
                let v1 = &n * &v2;
                let kernel = [v.column(1).into_owned(), v.column(2).into_owned()];
                let w = best_complement(&kernel, &v1);
                columns.extend([v1, v2, w]);
                blocks.push((start, 2, lambda));
                blocks.push((start + 2, 1, lambda));
            }
            _ => unreachable!("nullity is clamped to 1..mult"),
        }
    }
    let e = Mat::from_columns(&columns);
    let cond = condition(&e);
    if cond.is_nan() || cond > 1.0 / rank_tol {
        return Err(Error::IllConditioned {
            what: "Jordan basis",
            cond,
        });
    }
    let mut j = Mat::zeros(3, 3);
    for &(start, size, lambda) in &blocks {
        for i in start..start + size {
            j[(i, i)] = lambda;
            if i + 1 < start + size {
                j[(i, i + 1)] = c(1.0);
            }
        }
    }
    Ok(JordanForm { e, j, blocks })
}

/// Groups eigenvalues closer than `thr` (single linkage), each cluster
/// represented by its mean.
fn cluster(eig: &[C], thr: f64) -> Vec<(C, usize)> {
    let n = eig.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for k in 0..n {
            if (eig[i] - eig[k]).norm() <= thr {
                let (a, b) = (label[i], label[k]);
                let lo = a.min(b);
                for l in label.iter_mut() {
                    if *l == a || *l == b {
                        *l = lo;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for l in 0..n {
        let members: Vec<C> = (0..n).filter(|&i| label[i] == l).map(|i| eig[i]).collect();
        if !members.is_empty() {
            let mean = members.iter().sum::<C>() / c(members.len() as f64);
            out.push((mean, members.len()));
        }
    }
    out
}

/// The candidate with the largest component orthogonal to `v`, that
/// component normalized.
fn best_complement(candidates: &[Vector], v: &Vector) -> Vector {
    let nv = v.norm();
    let unit_v = if nv > 0.0 { v / c(nv) } else { v.clone() };
    candidates
        .iter()
        .map(|w| {
            let r = w - &unit_v * unit_v.dotc(w);
            let nr = r.norm();
            (nr, r)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(nr, r)| if nr > 0.0 { r / c(nr) } else { r })
        .expect("at least one candidate")
}
