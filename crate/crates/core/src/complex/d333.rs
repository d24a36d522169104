//! Decompositions of `3 x 3 x 3` tensors into at most five terms.
//!
//! The frontal slices are `A`, `B`, `C`. The reduction first makes `A` and
//! `B` singular by adding multiples of `C`, then splits on the rank of `C`:
//!
//! * rank 2: two-edge reduction when a null vector pair of one
//!   slice pairs nontrivially with another slice, one-edge reduction when
//!   two slices share a null vector, otherwise an explicit normal form;
//! * rank 3: a combination `alpha A + beta B + C` of rank 2 leads back to
//!   the singular stage; failing that, the null vectors of `A` and `B` give a
//!   frame in which the tensor has an explicit five-term form.
//!
//! Every reduction peels off explicit terms and hands a smaller core to the
//! `3 x 3 x 2` or `2 x 2 x 3` decomposers.

use nalgebra::DMatrix;

use super::d332::terms_332;
use super::linalg::{
    self, bilinear, c, left_null, rank_one_factors, resize_term, right_null, sin_angle, sub_tensor,
    svd, term, through_frame, through_permutation, try_inverse, unit, unitary_completion, vector,
    Mat, Tensor, Terms, Vector, C, I, ONE, ZERO,
};
use super::pencil::{pencil_polynomial, singularize_slice};
use super::rank222::{finish, terms_223};
use super::{Ctx, Tolerance};
use crate::error::{Error, Result};
use crate::tensor::{Decomposition, DIRECTION_PERMUTATIONS};

const MAX_DEPTH: usize = 8;

/// Decomposes a `3 x 3 x 3` tensor into at most five terms.
///
/// A failed attempt is retried on each permutation of the directions, then
/// with the rank and clustering tolerances widened a hundredfold. The error
/// names the last case reached and its residual.
pub fn decompose_333(t: &Tensor, tol: Tolerance) -> Result<Decomposition<C>> {
    decompose_333_traced(t, tol).map(|(d, _)| d)
}

/// Like [`decompose_333`], also returning the reduction steps taken.
pub fn decompose_333_traced(t: &Tensor, tol: Tolerance) -> Result<(Decomposition<C>, Vec<&'static str>)> {
    if t.dims() != [3, 3, 3] {
        return Err(Error::DimensionMismatch {
            expected: [3, 3, 3],
            found: t.dims(),
        });
    }
    tol.validate()?;
    let scale = t.max_norm();
    let mut failure = (String::from("none"), f64::INFINITY);
    for attempt in [tol, tol.scaled(100.0)] {
        for perm in DIRECTION_PERMUTATIONS {
            let mut solver = Solver {
                tol: attempt,
                path: Vec::new(),
                depth: 0,
            };
            let result = through_permutation(t, perm, |u| solver.run(u));
            let case = solver.path.last().copied().unwrap_or("start");
            match result {
                Ok(terms) => {
                    let terms = linalg::prune(terms, 0.0);
                    let residual = linalg::abs_residual(t, &terms)? / scale.max(f64::MIN_POSITIVE);
                    if terms.len() <= 5 && residual <= tol.residual_tol {
                        return Ok((finish(t, terms, tol, case)?, solver.path));
                    }
                    if residual < failure.1 || failure.1.is_nan() {
                        failure = (format!("{case} ({} terms)", terms.len()), residual);
                    }
                }
                Err(Error::Diagnostic { case, residual }) => {
                    if residual.is_nan() || residual < failure.1 {
                        failure = (case, residual);
                    }
                }
                Err(e) => {
                    if failure.1.is_infinite() {
                        failure = (format!("{case}: {e}"), f64::INFINITY);
                    }
                }
            }
        }
    }
    Err(Error::Diagnostic {
        case: failure.0,
        residual: failure.1,
    })
}

struct Solver {
    tol: Tolerance,
    path: Vec<&'static str>,
    depth: usize,
}

fn slices(t: &Tensor) -> Vec<Mat> {
    t.frontal_slices()
}

fn rows3(r: [[C; 3]; 3]) -> Mat {
    Mat::from_fn(3, 3, |i, j| r[i][j])
}

/// Permutation of the frontal slices putting `first`, `second` in front.
fn slice_order(first: usize, second: usize) -> Mat {
    let third = 3 - first - second;
    let order = [first, second, third];
    Mat::from_fn(3, 3, |i, j| if order[i] == j { ONE } else { ZERO })
}

/// Matrix with the given columns followed by an orthonormal completion.
fn extend_basis(cols: &[Vector]) -> Mat {
    let mut out: Vec<Vector> = cols.to_vec();
    let mut ortho: Vec<Vector> = Vec::new();
    for v in cols {
        let mut w = v.clone();
        for o in &ortho {
            w -= o * o.dotc(&w);
        }
        let n = w.norm();
        if n > 0.0 {
            ortho.push(w / c(n));
        }
    }
    for e in 0..3 {
        if out.len() == 3 {
            break;
        }
        let mut w = unit(3, e);
        for _ in 0..2 {
            for o in &ortho {
                w -= o * o.dotc(&w);
            }
        }
        let n = w.norm();
        if n > 1e-6 {
            let w = w / c(n);
            ortho.push(w.clone());
            out.push(w);
        }
    }
    Mat::from_columns(&out)
}

fn columns_rank(cols: &[Vector], tol: f64) -> usize {
    let m = Mat::from_columns(&cols.iter().map(|v| v / c(v.norm().max(f64::MIN_POSITIVE))).collect::<Vec<_>>());
    svd(&m).s.iter().filter(|&&s| s > tol).count()
}

fn diag_fail(case: &str, t: &Tensor, terms: &[linalg::Term]) -> Result<Error> {
    let scale = t.max_norm().max(f64::MIN_POSITIVE);
    Ok(Error::Diagnostic {
        case: case.into(),
        residual: linalg::abs_residual(t, terms)? / scale,
    })
}

impl Solver {
    fn ctx(&self, t: &Tensor) -> Ctx {
        Ctx::new(self.tol, t)
    }

    fn enter(&mut self, label: &'static str) -> Result<()> {
        self.path.push(label);
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Diagnostic {
                case: format!("{label}: reduction did not terminate"),
                residual: f64::INFINITY,
            });
        }
        Ok(())
    }

    fn run(&mut self, t: &Tensor) -> Result<Terms> {
        let ctx = self.ctx(t);
        if ctx.is_zero(t) {
            return Ok(Vec::new());
        }
        let s = slices(t);
        if linalg::max_abs(&s[2]) <= ctx.zero() {
            self.path.push("third slice zero");
            return drop_slice(t, 2, &ctx);
        }
        self.singularize(t)
    }

    /// Adds multiples of other slices to `A` and `B` until both are
    /// singular.
    fn singularize(&mut self, t: &Tensor) -> Result<Terms> {
        let ctx = self.ctx(t);
        let mut cur = slices(t);
        let mut r = Mat::identity(3, 3);
        let mut ok = true;
        for k in 0..2 {
            if ctx.rank(&cur[k]) <= 2 {
                continue;
            }
            let root = match singularize_slice(&cur[k], &cur[2], self.tol.rank_tol) {
                Ok(root) => Some((root.lambda, 2)),
                Err(Error::DegeneratePencil) => singularize_slice(&cur[k], &cur[1 - k], self.tol.rank_tol)
                    .ok()
                    .map(|root| (root.lambda, 1 - k)),
                Err(e) => return Err(e),
            };
            match root {
                Some((lambda, pivot)) => {
                    let row = r.row(k) - r.row(pivot) * lambda;
                    r.set_row(k, &row);
                    cur[k] = &cur[k] - &cur[pivot] * lambda;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && cur.iter().take(2).all(|m| ctx.rank(m) <= 2) {
            self.path.push("pencil roots");
            return through_frame(t, [None, None, Some(&r)], |u| self.after_singular(u));
        }
        self.path.push("singular combinations");
        let r = singular_combinations(&slices(t), &ctx).ok_or_else(|| Error::Diagnostic {
            case: "no singular slice combinations".into(),
            residual: f64::INFINITY,
        })?;
        through_frame(t, [None, None, Some(&r)], |u| self.after_singular(u))
    }

    /// `A` and `B` are singular.
    fn after_singular(&mut self, t: &Tensor) -> Result<Terms> {
        self.enter("singular front slices")?;
        let ctx = self.ctx(t);
        if ctx.is_zero(t) {
            return Ok(Vec::new());
        }
        let s = slices(t);
        let ranks: Vec<usize> = s.iter().map(|m| ctx.rank(m)).collect();
        if let Some(k) = (0..3).min_by_key(|&k| ranks[k]).filter(|&k| ranks[k] <= 1) {
            self.path.push("peel low-rank slice");
            let mut out = rank_one_factors(&s[k], ranks[k])
                .into_iter()
                .map(|(a, b)| term(a, b, unit(3, k)))
                .collect::<Terms>();
            out.extend(drop_slice(t, k, &ctx)?);
            return Ok(out);
        }
        if ranks[0] > 2 || ranks[1] > 2 {
            return Err(Error::Precondition("front slices are not singular".into()));
        }
        if ranks[2] <= 2 {
            self.singular_third(t, false)
        } else {
            self.invertible_third(t, false)
        }
    }

    /// All three slices have rank 2.
    fn singular_third(&mut self, t: &Tensor, transposed: bool) -> Result<Terms> {
        self.enter("third slice singular")?;
        let ctx = self.ctx(t);
        let s = slices(t);
        let x: Vec<Vector> = s.iter().map(right_null).collect();
        let y: Vec<Vector> = s.iter().map(left_null).collect();
        let pairs: Vec<(usize, usize)> = (0..3).flat_map(|k| (0..3).filter(move |&l| l != k).map(move |l| (k, l))).collect();
        if let Some(r) = self.try_edges(t, &ctx, &x, &y, &pairs)? {
            return Ok(r);
        }
        let par = self.tol.eig_cluster_tol;
        let rank_x = columns_rank(&x, par);
        if rank_x == 2 {
            self.path.push("null vectors in a plane");
            return null_plane_terms(t, &x, &y, &ctx);
        }
        let rank_y = columns_rank(&y, par);
        if rank_y <= 2 {
            if transposed {
                return Err(Error::Diagnostic {
                    case: "singular slices: null vectors dependent on both sides".into(),
                    residual: f64::INFINITY,
                });
            }
            self.path.push("independent null vectors (transposed)");
            return through_permutation(t, [1, 0, 2], |u| self.singular_third(u, true));
        }
        self.path.push("independent null vectors");
        null_basis_terms(t, &x, &y, &ctx)
    }

    /// Two-edge and one-edge reductions over the given `(slice, other)`
    /// pairs. `None` when neither applies.
    fn try_edges(
        &mut self,
        t: &Tensor,
        ctx: &Ctx,
        x: &[Vector],
        y: &[Vector],
        pairs: &[(usize, usize)],
    ) -> Result<Option<Terms>> {
        let s = slices(t);
        let best = pairs
            .iter()
            .map(|&(k, l)| (k, l, bilinear(&y[k], &s[l], &x[k]).norm()))
            .max_by(|a, b| a.2.total_cmp(&b.2));
        if let Some((k, l, v)) = best {
            if v > ctx.pivot() {
                self.path.push("two-edge reduction");
                return two_edge(t, k, l, ctx).map(Some);
            }
        }
        let par = self.tol.eig_cluster_tol;
        for &(k, l) in pairs.iter().filter(|p| p.0 < p.1) {
            if sin_angle(&x[k], &x[l]) <= par {
                self.path.push("one-edge reduction");
                return one_edge(t, k, l, &x[k], ctx).map(Some);
            }
            if sin_angle(&y[k], &y[l]) <= par {
                self.path.push("one-edge reduction (transposed)");
                return through_permutation(t, [1, 0, 2], |u| one_edge(u, k, l, &y[k], ctx)).map(Some);
            }
        }
        Ok(None)
    }

    /// `A`, `B` of rank 2 and `C` invertible.
    fn invertible_third(&mut self, t: &Tensor, transposed: bool) -> Result<Terms> {
        self.enter("third slice invertible")?;
        let ctx = self.ctx(t);
        let s = slices(t);
        if let Some(r) = rank_two_combination(&s, &ctx) {
            self.path.push("rank-2 slice combination");
            return through_frame(t, [None, None, Some(&r)], |u| self.after_singular(u));
        }
        let x = [right_null(&s[0]), right_null(&s[1])];
        let y = [left_null(&s[0]), left_null(&s[1])];
        let pairs = [(0, 1), (0, 2), (1, 0), (1, 2)];
        let xs = [x[0].clone(), x[1].clone(), Vector::zeros(3)];
        let ys = [y[0].clone(), y[1].clone(), Vector::zeros(3)];
        if let Some(r) = self.try_edges(t, &ctx, &xs, &ys, &pairs)? {
            return Ok(r);
        }
        let cinv = try_inverse(&s[2], "third slice")?;
        let x3 = &cinv * &s[0] * &x[1];
        let y3 = cinv.transpose() * s[0].transpose() * &y[1];
        let xm = [x[0].clone(), x[1].clone(), x3];
        let ym = [y[0].clone(), y[1].clone(), y3];
        let par = self.tol.eig_cluster_tol;
        if columns_rank(&xm, par) <= 2 {
            self.path.push("null frame degenerate");
            return self.reduce_third_by_pencil(t, &ctx);
        }
        if columns_rank(&ym, par) <= 2 {
            if transposed {
                return self.reduce_third_by_pencil(t, &ctx);
            }
            self.path.push("null frame (transposed)");
            return through_permutation(t, [1, 0, 2], |u| self.invertible_third(u, true));
        }
        self.path.push("null frame");
        let xmat = Mat::from_columns(&xm);
        let ymat = Mat::from_columns(&ym);
        let yt = ymat.transpose();
        let xt = xmat.transpose();
        let moved = linalg::transform(t, [Some(&yt), Some(&xt), None])?;
        let mctx = ctx.rescaled(&moved);
        let (delta, eta, gamma) = (moved.get(2, 2, 0), moved.get(2, 2, 1), moved.get(2, 2, 2));
        for (k, v) in [(0, delta), (1, eta)] {
            if v.norm() > mctx.pivot() {
                self.path.push("null frame: reduce third slice");
                let mut r = Mat::identity(3, 3);
                r[(2, k)] = -gamma / v;
                return through_frame(t, [Some(&yt), Some(&xt), None], |u| {
                    through_frame(u, [None, None, Some(&r)], |w| self.after_singular(w))
                });
            }
        }
        let xs = Mat::from_columns(&[xm[1].clone(), xm[0].clone(), xm[2].clone()]);
        let swapped = linalg::transform(t, [Some(&yt), Some(&xs.transpose()), None])?;
        let d = [swapped.get(0, 0, 2), swapped.get(1, 1, 2), swapped.get(2, 2, 2)];
        if d.iter().any(|v| v.norm() <= mctx.zero()) {
            return self.reduce_third_by_pencil(t, &ctx);
        }
        let dinv = Mat::from_diagonal(&vector(&[ONE / d[0], ONE / d[1], ONE / d[2]]));
        let left = &dinv * &yt;
        let right = xs.transpose();
        through_frame(t, [Some(&left), Some(&right), None], |w| hermitian_form(w, self.tol))
    }

    /// Makes the third slice singular with a multiple of `B` (or `A`) and
    /// restarts from the singular-slice stage.
    fn reduce_third_by_pencil(&mut self, t: &Tensor, ctx: &Ctx) -> Result<Terms> {
        let s = slices(t);
        for k in [1, 0] {
            if let Ok(root) = singularize_slice(&s[2], &s[k], self.tol.rank_tol) {
                let mut r = Mat::identity(3, 3);
                r[(2, k)] = -root.lambda;
                let cand = &s[2] - &s[k] * root.lambda;
                if ctx.rank(&cand) <= 2 {
                    return through_frame(t, [None, None, Some(&r)], |u| self.after_singular(u));
                }
            }
        }
        Err(Error::Diagnostic {
            case: "no rank-2 combination of the slices".into(),
            residual: f64::INFINITY,
        })
    }
}

/// The tensor with slice `k` negligible: the other two slices as a
/// `3 x 3 x 2` tensor.
fn drop_slice(t: &Tensor, k: usize, ctx: &Ctx) -> Result<Terms> {
    let keep: Vec<usize> = (0..3).filter(|&l| l != k).collect();
    let s = slices(t);
    let pair = Tensor::from_frontal_slices(&[s[keep[0]].clone(), s[keep[1]].clone()])?;
    let inner = terms_332(&pair, &ctx.rescaled(&pair).with_scale_at_least(ctx.scale))?;
    Ok(inner
        .into_iter()
        .map(|x| {
            let mut cv = Vector::zeros(3);
            cv[keep[0]] = x.c[0];
            cv[keep[1]] = x.c[1];
            term(x.a, x.b, cv)
        })
        .collect())
}

/// Two slices `k`, `l` with `x` a common right null vector: one term from
/// the remaining slice and a `3 x 3 x 2` core.
fn one_edge(t: &Tensor, k: usize, l: usize, x: &Vector, ctx: &Ctx) -> Result<Terms> {
    let order = slice_order(k, l);
    let q = unitary_completion(x)?;
    let qt = q.transpose();
    through_frame(t, [None, Some(&qt), Some(&order)], |u| {
        let s = slices(u);
        let leak = s[0].column(0).norm().max(s[1].column(0).norm());
        if leak > ctx.pivot() {
            return Err(Error::Precondition(format!(
                "one-edge reduction: shared null vector leaves {leak:.3e}"
            )));
        }
        let mut out = vec![term(s[2].column(0).into_owned(), unit(3, 0), unit(3, 2))];
        let core = sub_tensor(u, [0, 1, 0], [3, 2, 3])?;
        let inner = through_permutation(&core, [0, 2, 1], |w| terms_332(w, &ctx.rescaled(w).with_scale_at_least(ctx.scale)))?;
        out.extend(inner.iter().map(|x| resize_term(x, [3, 3, 3], [0, 1, 0])));
        Ok(out)
    })
}

/// Slice `k` with null vectors `x`, `y` and `y^t S_l x != 0`: two rank-one
/// completions and a `2 x 2 x 3` core.
fn two_edge(t: &Tensor, k: usize, l: usize, ctx: &Ctx) -> Result<Terms> {
    let order = slice_order(k, l);
    let s = slices(t);
    let x = right_null(&s[k]);
    let y = left_null(&s[k]);
    let ut = unitary_completion(&x)?.transpose();
    let vt = unitary_completion(&y)?.transpose();
    through_frame(t, [Some(&vt), Some(&ut), Some(&order)], |u| {
        let s = slices(u);
        let alpha = s[1][(0, 0)];
        if alpha.norm() <= ctx.pivot() {
            return Err(Error::Precondition("two-edge reduction: vanishing pivot".into()));
        }
        let beta = s[2][(0, 0)];
        let fold = if beta.norm() < 0.5 * alpha.norm() {
            Some(rows3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ONE, ONE]]))
        } else {
            None
        };
        through_frame(u, [None, None, fold.as_ref()], |w| {
            let s = slices(w);
            let mut out = Vec::with_capacity(5);
            for (m, sm) in s.iter().enumerate().skip(1) {
                let p = sm[(0, 0)];
                let col = sm.column(0).into_owned();
                let row = sm.row(0).transpose() / p;
                out.push(term(col, row, unit(3, m)));
            }
            let rest = w.sub(&linalg::evaluate_terms([3, 3, 3], &out)?)?;
            let core = sub_tensor(&rest, [1, 1, 0], [2, 2, 3])?;
            let inner = terms_223(&core, &ctx.rescaled(&core).with_scale_at_least(ctx.scale))?;
            out.extend(inner.iter().map(|x| resize_term(x, [3, 3, 3], [1, 1, 0])));
            Ok(out)
        })
    })
}

/// Rank of the null vectors of the three slices is 2: the first horizontal
/// slice in the frame `(V^t, U^t)` has rank at most one.
fn null_plane_terms(t: &Tensor, x: &[Vector], y: &[Vector], ctx: &Ctx) -> Result<Terms> {
    let u = extend_basis(&x[..2]);
    let v = extend_basis(&y[..1]);
    let (ut, vt) = (u.transpose(), v.transpose());
    through_frame(t, [Some(&vt), Some(&ut), None], |w| {
        let wctx = ctx.rescaled(w);
        let h = w.slice(0, 0)?;
        let mut out: Terms = rank_one_factors(&h, 1)
            .into_iter()
            .map(|(b, cv)| term(unit(3, 0), b, cv))
            .collect();
        let core = sub_tensor(w, [1, 0, 0], [2, 3, 3])?;
        let inner = through_permutation(&core, [1, 2, 0], |z| terms_332(z, &wctx.rescaled(z).with_scale_at_least(wctx.scale)))?;
        out.extend(inner.iter().map(|x| resize_term(x, [3, 3, 3], [1, 0, 0])));
        if linalg::abs_residual(w, &out)? > wctx.tol.residual_tol * wctx.scale {
            return Err(diag_fail("null vectors in a plane", w, &out)?);
        }
        Ok(out)
    })
}

/// Independent null vectors on both sides: five explicit terms in the
/// frame `(Y^t, X^t)` with the first two columns of `X` swapped.
fn null_basis_terms(t: &Tensor, x: &[Vector], y: &[Vector], ctx: &Ctx) -> Result<Terms> {
    let xs = Mat::from_columns(&[x[1].clone(), x[0].clone(), x[2].clone()]).transpose();
    let yt = Mat::from_columns(y).transpose();
    through_frame(t, [Some(&yt), Some(&xs), None], |w| {
        let alpha = w.get(2, 0, 0);
        let beta = w.get(1, 2, 0);
        let delta = w.get(0, 2, 1);
        let gamma = w.get(2, 1, 1);
        let zeta = w.get(0, 0, 2);
        let eps = w.get(1, 1, 2);
        let e = |i| unit(3, i);
        let out = vec![
            term(e(2), vector(&[alpha, -beta, -beta]), e(0)),
            term(vector(&[delta, -gamma, -gamma]), e(2), e(1)),
            term(e(0), e(0), vector(&[ZERO, ZERO, zeta])),
            term(vector(&[ZERO, ONE, ONE]), vector(&[ZERO, ONE, ONE]), vector(&[beta, gamma, ZERO])),
            term(e(1), e(1), vector(&[-beta, -gamma, eps])),
        ];
        let wctx = ctx.rescaled(w);
        if linalg::abs_residual(w, &out)? > wctx.tol.residual_tol * wctx.scale {
            return Err(diag_fail("independent null vectors", w, &out)?);
        }
        Ok(out)
    })
}

/// Normal form `[A | B | I]` with `A` supported on `(2,3)`, `(3,1)` and `B`
/// on `(1,3)`, `(3,2)`: two terms turn `B` Hermitian and clear `A`, and a
/// unitary diagonalization of `B` gives the last three.
fn hermitian_form(w: &Tensor, tol: Tolerance) -> Result<Terms> {
    let p = w.get(1, 2, 0);
    let q = w.get(2, 0, 0);
    let z = w.get(0, 2, 1);
    let e = w.get(2, 1, 1);
    let mut out = vec![
        term(unit(3, 1), unit(3, 2), vector(&[p, -e.conj(), ZERO])),
        term(unit(3, 2), unit(3, 0), vector(&[q, -z.conj(), ZERO])),
    ];
    let rest = w.sub(&linalg::evaluate_terms([3, 3, 3], &out)?)?;
    let b = rest.slice(2, 1)?;
    let herm = (&b + b.adjoint()) * c(0.5);
    let eig = herm.symmetric_eigen();
    let wm: DMatrix<C> = eig.eigenvectors;
    let (wh, wt) = (wm.adjoint(), wm.transpose());
    let diag = through_frame(&rest, [Some(&wh), Some(&wt), None], |r| {
        Ok((0..3)
            .map(|i| term(unit(3, i), unit(3, i), vector(&[r.get(i, i, 0), r.get(i, i, 1), r.get(i, i, 2)])))
            .collect())
    })?;
    out.extend(diag);
    let scale = w.max_norm();
    if linalg::abs_residual(w, &out)? > tol.residual_tol * scale {
        return Err(diag_fail("null frame normal form", w, &out)?);
    }
    Ok(out)
}

/// `R` with rows `(1,0,0)`, `(0,1,0)`, `(alpha, beta, 1)` making
/// `alpha A + beta B + C` of rank at most 2.
fn rank_two_combination(s: &[Mat], ctx: &Ctx) -> Option<Mat> {
    let shifts = [ZERO, ONE, -ONE, I, -I, C::new(0.5, 0.3)];
    let mut candidates: Vec<(C, C)> = Vec::new();
    for &beta in &shifts {
        // det(C + beta B + alpha A) in alpha.
        if let Some(alpha) = smallest_root(&(&s[2] + &s[1] * beta), &s[0], ctx) {
            candidates.push((alpha, beta));
        }
        if let Some(b) = smallest_root(&(&s[2] + &s[0] * beta), &s[1], ctx) {
            candidates.push((beta, b));
        }
    }
    candidates
        .into_iter()
        .filter(|&(a, b)| ctx.rank(&(&s[2] + &s[0] * a + &s[1] * b)) <= 2)
        .min_by(|x, y| (x.0.norm() + x.1.norm()).total_cmp(&(y.0.norm() + y.1.norm())))
        .map(|(a, b)| rows3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [a, b, ONE]]))
}

fn smallest_root(m: &Mat, n: &Mat, ctx: &Ctx) -> Option<C> {
    let poly = pencil_polynomial(m, n);
    let reference = poly.weights.iter().copied().fold(0.0, f64::max);
    if reference == 0.0 {
        return None;
    }
    let degree = poly.degree(ctx.tol.eig_cluster_tol, reference);
    poly.roots(degree)
        .into_iter()
        .filter(|r| r.re.is_finite() && r.im.is_finite())
        .min_by(|x, y| x.norm().total_cmp(&y.norm()))
}

/// Basis change of the slice space whose first two rows give singular
/// combinations, found on fixed lines through the cubic `det = 0`.
fn singular_combinations(s: &[Mat], ctx: &Ctx) -> Option<Mat> {
    let lines: [([f64; 3], [f64; 3]); 6] = [
        ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
        ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
        ([1.0, 1.0, 1.0], [0.5, -1.0, 0.7]),
        ([0.3, -0.8, 1.0], [-1.0, 0.1, 0.6]),
        ([1.0, 0.4, -0.2], [0.2, 1.0, 0.9]),
    ];
    let combo = |t: &[C; 3]| &s[0] * t[0] + &s[1] * t[1] + &s[2] * t[2];
    let mut points: Vec<[C; 3]> = Vec::new();
    for (p, q) in lines {
        let (p, q) = (p.map(c), q.map(c));
        let poly = pencil_polynomial(&combo(&p), &combo(&q));
        let reference = poly.weights.iter().copied().fold(0.0, f64::max);
        if reference <= ctx.zero().powi(3) {
            points.push(p);
            points.push(q);
            continue;
        }
        let degree = poly.degree(ctx.tol.eig_cluster_tol, reference);
        if degree < 3 {
            points.push(q);
        }
        for r in poly.roots(degree) {
            points.push([p[0] + q[0] * r, p[1] + q[1] * r, p[2] + q[2] * r]);
        }
    }
    let points: Vec<[C; 3]> = points
        .into_iter()
        .filter_map(|t| {
            let n = t.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            (n.is_finite() && n > 0.0).then(|| t.map(|x| x / c(n)))
        })
        .filter(|t| ctx.rank(&combo(t)) <= 2)
        .collect();
    let as_vec = |t: &[C; 3]| vector(t);
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let a = sin_angle(&as_vec(&points[i]), &as_vec(&points[j]));
            if best.is_none_or(|b| a > b.0) {
                best = Some((a, i, j));
            }
        }
    }
    let (angle, i, j) = best?;
    if angle < 1e-3 {
        return None;
    }
    let (t1, t2) = (points[i], points[j]);
    (0..3)
        .map(|e| {
            let r = rows3([t1, t2, [0, 1, 2].map(|m| if m == e { ONE } else { ZERO })]);
            (super::pencil::det3(&r).norm(), r)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|x| x.1)
}
