//! Small dense complex linear algebra on top of nalgebra: sorted SVD,
//! numerical rank, null vectors, unitary completion and the frame helpers
//! used to transport decompositions through changes of basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor, SimpleTerm};

pub type C = Complex64;
pub type Mat = DMatrix<C>;
pub type Vector = DVector<C>;
pub type Tensor = DenseTensor<C>;
pub type Term = SimpleTerm<C>;
pub type Terms = Vec<Term>;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn vector(entries: &[C]) -> Vector {
    DVector::from_column_slice(entries)
}

pub fn real_vector(entries: &[f64]) -> Vector {
    DVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x)))
}

pub fn unit(n: usize, i: usize) -> Vector {
    crate::tensor::unit(n, i)
}

/// Thin SVD with singular values in descending order. Columns of `u` and of
/// `v` pair with the singular values, and `m = u diag(s) v^H`.
pub struct Svd {
    pub u: Mat,
    pub s: Vec<f64>,
    pub v: Mat,
}

/// nalgebra's SVD, checked by reconstruction. Its complex `2 x 2`
/// subproblem drops the phase of the rotation on some exactly
/// rank-deficient inputs; those fall back to one-sided Jacobi.
pub fn svd(m: &Mat) -> Svd {
    let (r, cols) = m.shape();
    if r.min(cols) == 0 {
        return Svd {
            u: Mat::zeros(r, 0),
            s: Vec::new(),
            v: Mat::zeros(cols, 0),
        };
    }
    let d = m.clone().svd(true, true);
    let out = sorted(
        d.u.expect("requested u"),
        d.singular_values.iter().copied().collect(),
        d.v_t.expect("requested v_t").adjoint(),
    );
    if reconstruction_error(m, &out) <= 1e-10 * m.norm() {
        out
    } else {
        jacobi_svd(m)
    }
}

fn sorted(u: Mat, s: Vec<f64>, v: Mat) -> Svd {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    Svd {
        u: Mat::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]),
        s: order.iter().map(|&j| s[j]).collect(),
        v: Mat::from_fn(v.nrows(), order.len(), |i, j| v[(i, order[j])]),
    }
}

fn reconstruction_error(m: &Mat, d: &Svd) -> f64 {
    let s = Mat::from_diagonal(&Vector::from_iterator(d.s.len(), d.s.iter().map(|&x| c(x))));
    let e = (&d.u * s * d.v.adjoint() - m).norm();
    if e.is_finite() {
        e
    } else {
        f64::INFINITY
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn jacobi_svd(m: &Mat) -> Svd {
    let (r, cols) = m.shape();
    if r < cols {
        let d = jacobi_svd(&m.adjoint());
        return Svd {
            u: d.v,
            s: d.s,
            v: d.u,
        };
    }
    let mut a = m.clone();
    let mut v = Mat::identity(cols, cols);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase of the coupling, then a real rotation.
                let phase = (gamma / c(g)).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let x = mat[(i, p)];
                        let y = mat[(i, q)] * phase;
                        mat[(i, p)] = x * cs - y * sn;
                        mat[(i, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let top = s.iter().copied().fold(0.0, f64::max);
    let mut u = Mat::zeros(r, cols);
    let mut filled = Vec::new();
    for (j, &sj) in s.iter().enumerate() {
        if sj > f64::EPSILON * top && sj > 0.0 {
            u.set_column(j, &(a.column(j) / c(sj)));
            filled.push(j);
        }
    }
    for j in 0..cols {
        if filled.contains(&j) {
            continue;
        }
        for e in 0..r {
            let mut w = unit(r, e);
            for _ in 0..2 {
                for &f in &filled {
                    let col = u.column(f).into_owned();
                    w -= &col * col.dotc(&w);
                }
            }
            let n = w.norm();
            if n > 1e-6 {
                u.set_column(j, &(w / c(n)));
                filled.push(j);
                break;
            }
        }
    }
    sorted(u, s, v)
}

/// Full set of right singular vectors (including the nullspace directions
/// absent from the thin SVD when `rows < cols`), most significant first.
pub fn right_singular_basis(m: &Mat) -> (Vec<f64>, Mat) {
    let (r, cols) = m.shape();
    let square = if r < cols {
        Mat::from_fn(cols, cols, |i, j| if i < r { m[(i, j)] } else { ZERO })
    } else {
        m.clone()
    };
    let d = svd(&square);
    (d.s, d.v)
}

pub fn spectral_norm(m: &Mat) -> f64 {
    svd(m).s.first().copied().unwrap_or(0.0)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Number of singular values above `rank_tol * sigma_max`.
pub fn numerical_rank(m: &Mat, rank_tol: f64) -> usize {
    rank_scaled(m, rank_tol, 0.0)
}

/// Number of singular values above `rank_tol * max(scale, sigma_max)`.
pub fn rank_scaled(m: &Mat, rank_tol: f64, scale: f64) -> usize {
    let s = svd(m).s;
    let top = s.first().copied().unwrap_or(0.0);
    let thr = rank_tol * scale.max(top);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > thr).count()
}

/// `sigma_max / sigma_min`, infinite for singular or non-square input.
pub fn condition(m: &Mat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let s = svd(m).s;
    match (s.first(), s.last()) {
        (Some(&a), Some(&b)) if b > 0.0 => a / b,
        _ => f64::INFINITY,
    }
}

/// Unit vector spanning the numerical right nullspace: `m x ~ 0`.
pub fn right_null(m: &Mat) -> Vector {
    let (_, v) = right_singular_basis(m);
    v.column(m.ncols() - 1).into_owned()
}

/// Unit vector `y` with `y^t m ~ 0` (plain transpose, no conjugation).
pub fn left_null(m: &Mat) -> Vector {
    right_null(&m.transpose())
}

/// Unitary matrix whose first column is `x / |x|`.
pub fn unitary_completion(x: &Vector) -> Result<Mat> {
    let n = x.len();
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector(1));
    }
    let mut q = Mat::zeros(n, n);
    q.set_column(0, &(x / c(norm)));
    let mut filled = 1;
    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.sort_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm()));
    for e in candidates {
        if filled == n {
            break;
        }
        let mut v = unit(n, e);
        for _ in 0..2 {
            for j in 0..filled {
                let col = q.column(j).into_owned();
                let proj = col.dotc(&v);
                v -= col * proj;
            }
        }
        let nv = v.norm();
        if nv > 1e-8 {
            q.set_column(filled, &(v / c(nv)));
            filled += 1;
        }
    }
    Ok(q)
}

/// `|sin|` of the angle between two nonzero vectors.
pub fn sin_angle(x: &Vector, y: &Vector) -> f64 {
    let (nx, ny) = (x.norm(), y.norm());
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    let cos = (x.dotc(y)).norm() / (nx * ny);
    (1.0 - cos * cos).max(0.0).sqrt()
}

/// `y^t m x` with plain transposes.
pub fn bilinear(y: &Vector, m: &Mat, x: &Vector) -> C {
    (y.transpose() * m * x)[(0, 0)]
}

/// `sigma u (x) conj(v)` pieces of the leading `k` singular triples, so that
/// `m = sum a b^t` when `k` reaches the rank.
pub fn rank_one_factors(m: &Mat, k: usize) -> Vec<(Vector, Vector)> {
    let d = svd(m);
    (0..k.min(d.s.len()))
        .map(|i| {
            (
                d.u.column(i) * c(d.s[i]),
                d.v.column(i).map(|z| z.conj()),
            )
        })
        .collect()
}

pub fn try_inverse(m: &Mat, what: &'static str) -> Result<Mat> {
    let cond = condition(m);
    if !cond.is_finite() {
        return Err(Error::IllConditioned { what, cond });
    }
    m.clone()
        .try_inverse()
        .ok_or(Error::IllConditioned { what, cond })
}

/// Applies a change of basis matrix to each direction (`None` = identity).
pub fn transform(t: &Tensor, mats: [Option<&Mat>; 3]) -> Result<Tensor> {
    let mut out = t.clone();
    for (d, m) in mats.iter().enumerate() {
        if let Some(m) = m {
            out = out.mode_product(d, m)?;
        }
    }
    Ok(out)
}

/// Decomposes `t` through the frame `mats`: the callback receives
/// `mats . t`, and its terms are pulled back by the inverse matrices.
pub fn through_frame(
    t: &Tensor,
    mats: [Option<&Mat>; 3],
    f: impl FnOnce(&Tensor) -> Result<Terms>,
) -> Result<Terms> {
    let inv: Vec<Option<Mat>> = mats
        .iter()
        .map(|m| m.map(|m| try_inverse(m, "change of basis")).transpose())
        .collect::<Result<_>>()?;
    let moved = transform(t, mats)?;
    let terms = f(&moved)?;
    Ok(terms
        .into_iter()
        .map(|term| SimpleTerm {
            a: apply_opt(&inv[0], term.a),
            b: apply_opt(&inv[1], term.b),
            c: apply_opt(&inv[2], term.c),
        })
        .collect())
}

fn apply_opt(m: &Option<Mat>, v: Vector) -> Vector {
    match m {
        Some(m) => m * v,
        None => v,
    }
}

/// Decomposes `t` with its directions permuted (`perm` as in
/// [`DenseTensor::permute_directions`]) and maps the terms back.
pub fn through_permutation(
    t: &Tensor,
    perm: [usize; 3],
    f: impl FnOnce(&Tensor) -> Result<Terms>,
) -> Result<Terms> {
    let moved = t.permute_directions(perm);
    let terms = f(&moved)?;
    Ok(terms.into_iter().map(|term| unpermute_term(term, perm)).collect())
}

pub fn unpermute_term(term: SimpleTerm<C>, perm: [usize; 3]) -> SimpleTerm<C> {
    let mut v = [Some(term.a), Some(term.b), Some(term.c)];
    let mut out: [Option<Vector>; 3] = [None, None, None];
    for d in 0..3 {
        out[perm[d]] = v[d].take();
    }
    let [a, b, c] = out.map(|x| x.expect("permutation"));
    SimpleTerm { a, b, c }
}

/// Term from raw vectors (no zero check).
pub fn term(a: Vector, b: Vector, c: Vector) -> SimpleTerm<C> {
    SimpleTerm { a, b, c }
}

/// Sum of the terms' outer products, in the given dims.
pub fn evaluate_terms(dims: [usize; 3], terms: &[SimpleTerm<C>]) -> Result<Tensor> {
    let mut sum = Tensor::zeros(dims)?;
    for t in terms {
        sum = sum.add(&t.to_tensor())?;
    }
    Ok(sum)
}

/// Max-norm of `t - sum(terms)`.
pub fn abs_residual(t: &Tensor, terms: &[SimpleTerm<C>]) -> Result<f64> {
    Ok(t.sub(&evaluate_terms(t.dims(), terms)?)?.max_norm())
}

/// Drops terms whose outer product is negligible against `floor`, and
/// balances the vector norms of the rest.
pub fn prune(terms: Terms, floor: f64) -> Terms {
    terms
        .into_iter()
        .filter_map(|t| {
            let (na, nb, nc) = (t.a.norm(), t.b.norm(), t.c.norm());
            let size = na * nb * nc;
            if !size.is_finite() || size <= floor {
                return None;
            }
            let g = size.cbrt();
            Some(SimpleTerm {
                a: t.a * c(g / na),
                b: t.b * c(g / nb),
                c: t.c * c(g / nc),
            })
        })
        .collect()
}

/// Pads each vector with zeros (or truncates) to the given lengths.
pub fn resize_term(t: &SimpleTerm<C>, dims: [usize; 3], offset: [usize; 3]) -> SimpleTerm<C> {
    let f = |v: &Vector, n: usize, off: usize| {
        Vector::from_fn(n, |i, _| {
            if i >= off && i - off < v.len() {
                v[i - off]
            } else {
                ZERO
            }
        })
    };
    SimpleTerm {
        a: f(&t.a, dims[0], offset[0]),
        b: f(&t.b, dims[1], offset[1]),
        c: f(&t.c, dims[2], offset[2]),
    }
}

/// Sub-block `t[i0.., j0.., k0..]` of the given dims.
pub fn sub_tensor(t: &Tensor, start: [usize; 3], dims: [usize; 3]) -> Result<Tensor> {
    Tensor::from_fn(dims, |i, j, k| t.get(i + start[0], j + start[1], k + start[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Mat {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| c(rows[i][j]))
    }

    #[test]
    fn ranks() {
        let id = Mat::identity(3, 3);
        assert_eq!(rank_scaled(&id, 1e-9, 0.0), 3);
        let x = real_vector(&[1.0, 2.0, 3.0]);
        let y = real_vector(&[0.0, 1.0, -1.0]);
        assert_eq!(rank_scaled(&(&x * y.transpose()), 1e-9, 0.0), 1);
        assert_eq!(rank_scaled(&m(&[&[1.0, 0.0], &[0.0, 1e-15]]), 1e-9, 0.0), 1);
        assert_eq!(rank_scaled(&Mat::zeros(3, 3), 1e-9, 1.0), 0);
    }

    #[test]
    fn null_vectors() {
        let a = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 9.0]]);
        let x = right_null(&a);
        let y = left_null(&a);
        assert!((&a * &x).norm() < 1e-12);
        assert!((y.transpose() * &a).norm() < 1e-12);
    }

    #[test]
    fn rank_deficient_complex_svd() {
        // nalgebra's own factors for this matrix do not multiply back to it.
        let m = Mat::from_column_slice(
            2,
            2,
            &[
                C::new(0.12065837240286713, -0.3807116406131414),
                C::new(-0.0422381688000171, -0.16194492678061015),
                C::new(1.9743876942171086, 0.6697694354482095),
                C::new(0.8496866832209665, -0.2034363085052154),
            ],
        );
        for d in [svd(&m), jacobi_svd(&m)] {
            assert!(reconstruction_error(&m, &d) < 1e-12);
            assert!(d.s[1] < 1e-12);
        }
        let (a, b) = rank_one_factors(&m, 1).remove(0);
        assert!((a * b.transpose() - &m).norm() < 1e-12);
    }

    #[test]
    fn jacobi_matches_on_rectangular_input() {
        let m = Mat::from_fn(3, 4, |i, j| C::new((i + 2 * j) as f64 - 2.5, (i * j) as f64 * 0.3));
        for d in [jacobi_svd(&m), jacobi_svd(&m.transpose())] {
            let want = svd(&m).s;
            for (x, y) in d.s.iter().zip(&want) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(reconstruction_error(&m, &jacobi_svd(&m)) < 1e-12);
    }

    #[test]
    fn completion_is_unitary() {
        let x = vector(&[C::new(1.0, 2.0), ZERO, C::new(-0.5, 0.1)]);
        let q = unitary_completion(&x).unwrap();
        assert!((q.adjoint() * &q - Mat::identity(3, 3)).norm() < 1e-12);
        assert!(sin_angle(&q.column(0).into_owned(), &x) < 1e-12);
    }

    #[test]
    fn frame_round_trip() {
        let t = Tensor::from_fn([2, 3, 2], |i, j, k| C::new(i as f64 + 1.0, (j * k) as f64)).unwrap();
        let p = m(&[&[2.0, 1.0], &[0.0, 1.0]]);
        let q = m(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[1.0, 1.0, 1.0]]);
        // Trivial inner decomposition: one term per nonzero entry.
        let inner = |x: &Tensor| -> Result<Terms> {
            let d = x.dims();
            let mut out = Vec::new();
            for n in 0..x.len() {
                let [i, j, k] = crate::tensor::lex_subscripts(d, n);
                out.push(term(unit(d[0], i) * x.get(i, j, k), unit(d[1], j), unit(d[2], k)));
            }
            Ok(out)
        };
        let terms = through_frame(&t, [Some(&p), Some(&q), None], inner).unwrap();
        assert!(abs_residual(&t, &terms).unwrap() < 1e-12);
        let terms = through_permutation(&t, [2, 0, 1], inner).unwrap();
        assert!(abs_residual(&t, &terms).unwrap() < 1e-12);
    }
}
