//! Rank and explicit decompositions of `2 x 2 x 2` tensors, plus the
//! `2 x 2 x 3` cores left over by the `3 x 3 x 3` reductions.

use super::linalg::{
    self, c, max_abs, rank_one_factors, svd, term, through_frame, through_permutation, try_inverse,
    unit, vector, Mat, Tensor, Terms, C, ONE, ZERO,
};
use super::{Ctx, Tolerance};
use crate::error::{Error, Result};
use crate::tensor::Decomposition;

fn check_dims(t: &Tensor, dims: [usize; 3]) -> Result<()> {
    if t.dims() != dims {
        return Err(Error::DimensionMismatch {
            expected: dims,
            found: t.dims(),
        });
    }
    Ok(())
}

/// Cayley's hyperdeterminant of a `2 x 2 x 2` tensor.
pub fn hyperdeterminant(t: &Tensor) -> Result<C> {
    check_dims(t, [2, 2, 2])?;
    let x = |i: usize, j: usize, k: usize| t.get(i - 1, j - 1, k - 1);
    let sq = |v: C| v * v;
    Ok(sq(x(1, 1, 1) * x(2, 2, 2))
        + sq(x(1, 1, 2) * x(2, 2, 1))
        + sq(x(1, 2, 1) * x(2, 1, 2))
        + sq(x(1, 2, 2) * x(2, 1, 1))
        - c(2.0)
            * (x(1, 1, 1) * x(1, 1, 2) * x(2, 2, 1) * x(2, 2, 2)
                + x(1, 1, 1) * x(1, 2, 1) * x(2, 1, 2) * x(2, 2, 2)
                + x(1, 1, 1) * x(1, 2, 2) * x(2, 1, 1) * x(2, 2, 2)
                + x(1, 1, 2) * x(1, 2, 1) * x(2, 1, 2) * x(2, 2, 1)
                + x(1, 1, 2) * x(1, 2, 2) * x(2, 1, 1) * x(2, 2, 1)
                + x(1, 2, 1) * x(1, 2, 2) * x(2, 1, 1) * x(2, 1, 2))
        + c(4.0)
            * (x(1, 1, 1) * x(1, 2, 2) * x(2, 1, 2) * x(2, 2, 1)
                + x(1, 1, 2) * x(1, 2, 1) * x(2, 1, 1) * x(2, 2, 2)))
}

/// Nonzero entries confined to one antipodal pair of positions:
/// `(i, j, k)` and `(1 - i, 1 - j, 1 - k)` with `k = 0` for the first.
/// Returns the first position of the pair when it applies.
fn superdiagonal_pair(t: &Tensor, zero: f64) -> Option<[usize; 3]> {
    let nonzero: Vec<usize> = (0..8).filter(|&n| t.entries()[n].norm() > zero).collect();
    if nonzero.len() != 2 || nonzero[0] + nonzero[1] != 7 {
        return None;
    }
    let n = if nonzero[0] & 1 == 0 { nonzero[0] } else { nonzero[1] };
    Some([n >> 2 & 1, n >> 1 & 1, n & 1])
}

/// True when exactly two antipodal entries are nonzero (up to `rank_tol`
/// times the max-norm) and the tensor is one of the four two-term normal
/// forms.
pub fn is_superdiagonal(t: &Tensor, tol: Tolerance) -> Result<bool> {
    check_dims(t, [2, 2, 2])?;
    Ok(superdiagonal_pair(t, tol.rank_tol * t.max_norm()).is_some())
}

/// Classification of a `2 x 2 x 2` tensor, shared by the rank and the
/// decomposition entry points.
enum Shape {
    Zero,
    Superdiagonal([usize; 3]),
    RankOne,
    /// Best-conditioned slice and its direction and index.
    Sliced { direction: usize, index: usize },
}

fn all_slices(t: &Tensor) -> Vec<(usize, usize, Mat)> {
    let mut out = Vec::with_capacity(6);
    for d in 0..3 {
        for i in 0..2 {
            out.push((d, i, t.slice(d, i).expect("2 x 2 x 2 slice")));
        }
    }
    out
}

fn classify(t: &Tensor, ctx: &Ctx) -> Shape {
    if ctx.is_zero(t) {
        return Shape::Zero;
    }
    if let Some(p) = superdiagonal_pair(t, ctx.zero()) {
        return Shape::Superdiagonal(p);
    }
    let slices = all_slices(t);
    let best = slices
        .iter()
        .map(|(d, i, m)| {
            let s = svd(m).s;
            (*d, *i, s[1] / s[0].max(f64::MIN_POSITIVE))
        })
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .expect("six slices");
    if slices.iter().all(|(_, _, m)| ctx.rank(m) <= 1) {
        return Shape::RankOne;
    }
    Shape::Sliced {
        direction: best.0,
        index: best.1,
    }
}

/// Whether `x2` is a multiple of the invertible `x1`; returns the factor.
fn proportional(x1: &Mat, x2: &Mat, ctx: &Ctx) -> Option<C> {
    let denom = x1.dotc(x1);
    let mu = x1.dotc(x2) / denom;
    (max_abs(&(x2 - x1 * mu)) <= ctx.zero()).then_some(mu)
}

/// Brings the chosen slice to the front position along direction 3.
fn orient(direction: usize, index: usize) -> ([usize; 3], bool) {
    let perm = match direction {
        0 => [1, 2, 0],
        1 => [0, 2, 1],
        _ => [0, 1, 2],
    };
    (perm, index == 1)
}

/// Rank of a `2 x 2 x 2` tensor: 0, 1, 2 or 3.
pub fn rank_222(t: &Tensor, tol: Tolerance) -> Result<usize> {
    check_dims(t, [2, 2, 2])?;
    tol.validate()?;
    let ctx = Ctx::new(tol, t);
    Ok(match classify(t, &ctx) {
        Shape::Zero => 0,
        Shape::Superdiagonal(_) => 2,
        Shape::RankOne => 1,
        Shape::Sliced { direction, index } => {
            let (perm, swap) = orient(direction, index);
            let u = t.permute_directions(perm);
            let s = u.frontal_slices();
            let (x1, x2) = if swap { (&s[1], &s[0]) } else { (&s[0], &s[1]) };
            if proportional(x1, x2, &ctx).is_some() {
                2
            } else {
                let delta = hyperdeterminant(t)?;
                if delta.norm() > tol.rank_tol * ctx.scale.powi(4) {
                    2
                } else {
                    3
                }
            }
        }
    })
}

/// Explicit decomposition with `rank_222(t)` terms.
pub fn decompose_222(t: &Tensor, tol: Tolerance) -> Result<Decomposition<C>> {
    check_dims(t, [2, 2, 2])?;
    tol.validate()?;
    let ctx = Ctx::new(tol, t);
    let terms = terms_222(t, &ctx)?;
    finish(t, terms, tol, "2 x 2 x 2")
}

pub(crate) fn finish(t: &Tensor, terms: Terms, tol: Tolerance, case: &str) -> Result<Decomposition<C>> {
    let terms = linalg::prune(terms, 0.0);
    let mut d = Decomposition::new(t.dims(), terms)?;
    d.residual = super::verify::relative_residual(t, &d)?;
    if d.residual > tol.residual_tol {
        return Err(Error::Diagnostic {
            case: case.into(),
            residual: d.residual,
        });
    }
    Ok(d)
}

pub(crate) fn terms_222(t: &Tensor, ctx: &Ctx) -> Result<Terms> {
    match classify(t, ctx) {
        Shape::Zero => Ok(Vec::new()),
        Shape::Superdiagonal([i, j, k]) => {
            let alpha = t.get(i, j, k);
            let beta = t.get(1 - i, 1 - j, 1 - k);
            Ok(vec![
                term(unit(2, i) * alpha, unit(2, j), unit(2, k)),
                term(unit(2, 1 - i) * beta, unit(2, 1 - j), unit(2, 1 - k)),
            ])
        }
        Shape::RankOne => {
            let one = rank_one(t);
            if linalg::abs_residual(t, &one)? <= ctx.tol.residual_tol * ctx.scale {
                return Ok(one);
            }
            let best = best_slice(t);
            sliced(t, best.0, best.1, ctx)
        }
        Shape::Sliced { direction, index } => sliced(t, direction, index, ctx),
    }
}

fn best_slice(t: &Tensor) -> (usize, usize) {
    all_slices(t)
        .into_iter()
        .map(|(d, i, m)| {
            let s = svd(&m).s;
            (d, i, s[1] / s[0].max(f64::MIN_POSITIVE))
        })
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .map(|(d, i, _)| (d, i))
        .expect("six slices")
}

/// Factors a rank-one tensor at its largest entry.
fn rank_one(t: &Tensor) -> Terms {
    let (n, _) = t
        .entries()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty");
    let [i0, j0, k0] = crate::tensor::lex_subscripts(t.dims(), n);
    let [p, q, r] = t.dims();
    let x0 = t.get(i0, j0, k0);
    let a = linalg::Vector::from_fn(p, |i, _| t.get(i, j0, k0));
    let b = linalg::Vector::from_fn(q, |j, _| t.get(i0, j, k0) / x0);
    let cv = linalg::Vector::from_fn(r, |k, _| t.get(i0, j0, k) / x0);
    vec![term(a, b, cv)]
}

fn sliced(t: &Tensor, direction: usize, index: usize, ctx: &Ctx) -> Result<Terms> {
    let (perm, swap) = orient(direction, index);
    through_permutation(t, perm, |u| {
        let r = if swap { Some(crate::tensor::swap_matrix(2, 0, 1)) } else { None };
        through_frame(u, [None, None, r.as_ref()], |v| front_invertible(v, ctx))
    })
}

/// Decomposes `[X1 | X2]` with `X1` the best-conditioned slice.
fn front_invertible(t: &Tensor, ctx: &Ctx) -> Result<Terms> {
    let s = t.frontal_slices();
    let (x1, x2) = (&s[0], &s[1]);
    if let Some(mu) = proportional(x1, x2, ctx) {
        return Ok(rank_one_factors(x1, 2)
            .into_iter()
            .map(|(a, b)| term(a, b, vector(&[ONE, mu])))
            .collect());
    }
    // det(X2 - lambda X1) = a lambda^2 - b lambda + c.
    let x = |i: usize, j: usize, k: usize| t.get(i - 1, j - 1, k - 1);
    let qa = x(1, 1, 1) * x(2, 2, 1) - x(1, 2, 1) * x(2, 1, 1);
    let qb = x(1, 1, 1) * x(2, 2, 2) + x(1, 1, 2) * x(2, 2, 1) - x(1, 2, 1) * x(2, 1, 2) - x(1, 2, 2) * x(2, 1, 1);
    let qc = x(1, 1, 2) * x(2, 2, 2) - x(1, 2, 2) * x(2, 1, 2);
    let disc = qb * qb - c(4.0) * qa * qc;
    let delta = hyperdeterminant(t)?;
    if delta.norm() > ctx.tol.rank_tol * ctx.scale.powi(4) && qa.norm() > 0.0 {
        let root = disc.sqrt();
        let big = if (qb + root).norm() >= (qb - root).norm() { qb + root } else { qb - root };
        let l1 = big / (c(2.0) * qa);
        let l2 = if big.norm() > 0.0 { c(2.0) * qc / big } else { l1 };
        if (l1 - l2).norm() > 0.0 {
            let m1 = (x2 - x1 * l2) / (l1 - l2);
            let m2 = -(x2 - x1 * l1) / (l1 - l2);
            let mut terms = Vec::with_capacity(2);
            for (m, l) in [(m1, l1), (m2, l2)] {
                let (a, b) = rank_one_factors(&m, 1).remove(0);
                terms.push(term(a, b, vector(&[ONE, l])));
            }
            if linalg::abs_residual(t, &terms)? <= ctx.tol.residual_tol * ctx.scale {
                return Ok(terms);
            }
        }
    }
    three_terms(x1, x2)
}

/// The generic three-term formula for `[X1 | X2]` with `X1` invertible.
fn three_terms(x1: &Mat, x2: &Mat) -> Result<Terms> {
    let y = x2 * try_inverse(x1, "front slice")?;
    let a = Mat::from_row_slice(2, 3, &[ONE, ZERO, y[(0, 1)], ZERO, ONE, y[(1, 0)]]);
    let b = x1.transpose() * Mat::from_row_slice(2, 3, &[ONE, ZERO, ONE, ZERO, ONE, ONE]);
    let d = [ONE, ONE, ZERO];
    let e = [y[(0, 0)] - y[(0, 1)], y[(1, 1)] - y[(1, 0)], ONE];
    Ok((0..3)
        .map(|i| term(a.column(i).into_owned(), b.column(i).into_owned(), vector(&[d[i], e[i]])))
        .collect())
}

/// Decomposes a `2 x 2 x 3` tensor into at most three terms.
pub fn decompose_223(t: &Tensor, tol: Tolerance) -> Result<Decomposition<C>> {
    check_dims(t, [2, 2, 3])?;
    tol.validate()?;
    let ctx = Ctx::new(tol, t);
    let terms = terms_223(t, &ctx)?;
    finish(t, terms, tol, "2 x 2 x 3")
}

/// The frontal slices span at most a three-dimensional space of `2 x 2`
/// matrices. With span dimension at most 2 the tensor compresses to
/// `2 x 2 x 2`; otherwise three independent rank-one matrices of the span
/// are found on the conic `det = 0`.
pub(crate) fn terms_223(t: &Tensor, ctx: &Ctx) -> Result<Terms> {
    if ctx.is_zero(t) {
        return Ok(Vec::new());
    }
    // Rows k of the unfolding are the vectorized slices.
    let unfold = Mat::from_fn(3, 4, |k, n| t.get(n / 2, n % 2, k));
    let d = svd(&unfold);
    let dim = d.s.iter().filter(|&&s| s > ctx.zero().max(ctx.tol.rank_tol * d.s[0])).count();
    let basis: Vec<Mat> = (0..3)
        .map(|l| Mat::from_fn(2, 2, |i, j| d.v[(i * 2 + j, l)].conj() * c(d.s[l])))
        .collect();
    let u = d.u.clone();
    if dim <= 2 {
        let core = Tensor::from_frontal_slices(&basis[..2])?;
        let inner = terms_222(&core, &ctx.rescaled(&core))?;
        return Ok(inner
            .into_iter()
            .map(|x| {
                let cv = u.column(0) * x.c[0] + u.column(1) * x.c[1];
                term(x.a, x.b, cv)
            })
            .collect());
    }
    let points = conic_points(&basis);
    let chosen = best_triple(&points).ok_or_else(|| Error::Diagnostic {
        case: "2 x 2 x 3 core: no rank-one basis of the slice span".into(),
        residual: f64::NAN,
    })?;
    let tm = Mat::from_fn(3, 3, |j, l| chosen[j][l]);
    let tinv = try_inverse(&tm, "rank-one basis")?;
    let coef = &u * &tinv;
    let mut terms = Vec::with_capacity(3);
    for (j, row) in chosen.iter().enumerate() {
        let h = &basis[0] * row[0] + &basis[1] * row[1] + &basis[2] * row[2];
        let (a, b) = rank_one_factors(&h, 1).remove(0);
        terms.push(term(a, b, coef.column(j).into_owned()));
    }
    Ok(terms)
}

/// Points `t` with `det(sum t_l G_l) = 0`, from a few fixed lines in the
/// coefficient space.
fn conic_points(g: &[Mat]) -> Vec<[C; 3]> {
    let lines: [([f64; 3], [f64; 3]); 5] = [
        ([1.0, 0.0, 0.0], [0.0, 1.0, 0.3]),
        ([0.0, 1.0, 0.0], [0.2, 0.0, 1.0]),
        ([0.0, 0.0, 1.0], [1.0, -0.4, 0.0]),
        ([1.0, 1.0, 1.0], [0.5, -1.0, 0.7]),
        ([0.3, -0.8, 1.0], [-1.0, 0.1, 0.6]),
    ];
    let combo = |t: &[C; 3]| &g[0] * t[0] + &g[1] * t[1] + &g[2] * t[2];
    let det2 = |m: &Mat| m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let mut out = Vec::new();
    for (p, q) in lines {
        let p = p.map(c);
        let q = q.map(c);
        let m0 = combo(&p);
        let m1 = combo(&q);
        // det(m0 + s m1) = d0 + d1 s + d2 s^2.
        let d0 = det2(&m0);
        let d2 = det2(&m1);
        let d1 = m0[(0, 0)] * m1[(1, 1)] + m1[(0, 0)] * m0[(1, 1)] - m0[(0, 1)] * m1[(1, 0)] - m1[(0, 1)] * m0[(1, 0)];
        let scale = d0.norm().max(d1.norm()).max(d2.norm());
        if scale == 0.0 {
            continue;
        }
        let mut params = Vec::new();
        if d2.norm() > 1e-12 * scale {
            let root = (d1 * d1 - c(4.0) * d2 * d0).sqrt();
            let big = if (d1 + root).norm() >= (d1 - root).norm() { d1 + root } else { d1 - root };
            if big.norm() > 0.0 {
                params.push(-big / (c(2.0) * d2));
                params.push(-c(2.0) * d0 / big);
            } else {
                params.push(ZERO);
            }
        } else if d1.norm() > 1e-12 * scale {
            params.push(-d0 / d1);
            // The second intersection is the point at infinity, `q` itself.
            out.push(q);
        } else {
            continue;
        }
        for s in params {
            out.push([p[0] + q[0] * s, p[1] + q[1] * s, p[2] + q[2] * s]);
        }
    }
    out
}

/// Three normalized points with the largest `|det|`.
fn best_triple(points: &[[C; 3]]) -> Option<[[C; 3]; 3]> {
    let unitized: Vec<[C; 3]> = points
        .iter()
        .filter_map(|p| {
            let n = p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            (n > 0.0 && n.is_finite()).then(|| p.map(|x| x / c(n)))
        })
        .collect();
    let mut best: Option<(f64, [[C; 3]; 3])> = None;
    for i in 0..unitized.len() {
        for j in i + 1..unitized.len() {
            for k in j + 1..unitized.len() {
                let rows = [unitized[i], unitized[j], unitized[k]];
                let m = Mat::from_fn(3, 3, |r, s| rows[r][s]);
                let d = super::pencil::det3(&m).norm();
                if best.as_ref().is_none_or(|b| d > b.0) {
                    best = Some((d, rows));
                }
            }
        }
    }
    best.filter(|b| b.0 > 1e-8).map(|b| b.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t222(x1: [[f64; 2]; 2], x2: [[f64; 2]; 2]) -> Tensor {
        let s = [x1, x2];
        Tensor::from_fn([2, 2, 2], |i, j, k| c(s[k][i][j])).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn example_tensors() {
        let x = t222([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(hyperdeterminant(&x).unwrap(), ZERO);
        assert_eq!(rank_222(&x, tol()).unwrap(), 3);
        let a: f64 = 0.7;
        let y = t222([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [a * a, 0.0]]);
        assert!((hyperdeterminant(&y).unwrap() - c(4.0 * a * a)).norm() < 1e-12);
        assert_eq!(rank_222(&y, tol()).unwrap(), 2);
        for t in [x, y] {
            let d = decompose_222(&t, tol()).unwrap();
            assert_eq!(d.len(), rank_222(&t, tol()).unwrap());
            assert!(d.residual < 1e-12);
        }
    }

    #[test]
    fn superdiagonal_forms() {
        let forms = [
            t222([[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 3.0]]),
            t222([[0.0, 2.0], [0.0, 0.0]], [[0.0, 0.0], [3.0, 0.0]]),
            t222([[0.0, 0.0], [2.0, 0.0]], [[0.0, 3.0], [0.0, 0.0]]),
            t222([[0.0, 0.0], [0.0, 2.0]], [[3.0, 0.0], [0.0, 0.0]]),
        ];
        for f in &forms {
            assert!(is_superdiagonal(f, tol()).unwrap());
            assert_eq!(rank_222(f, tol()).unwrap(), 2);
            let d = decompose_222(f, tol()).unwrap();
            assert_eq!(d.len(), 2);
            assert_eq!(d.residual, 0.0);
        }
        assert!(!is_superdiagonal(&t222([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]), tol()).unwrap());
    }

    #[test]
    fn small_ranks() {
        let zero = Tensor::zeros([2, 2, 2]).unwrap();
        assert_eq!(rank_222(&zero, tol()).unwrap(), 0);
        assert_eq!(decompose_222(&zero, tol()).unwrap().len(), 0);
        let one = crate::tensor::outer_product(&[c(1.0), c(2.0)], &[c(-1.0), c(0.5)], &[c(3.0), c(1.0)]).unwrap();
        assert_eq!(rank_222(&one, tol()).unwrap(), 1);
        assert_eq!(decompose_222(&one, tol()).unwrap().len(), 1);
        let prop = t222([[1.0, 2.0], [3.0, 4.0]], [[2.0, 4.0], [6.0, 8.0]]);
        assert_eq!(rank_222(&prop, tol()).unwrap(), 2);
        assert_eq!(decompose_222(&prop, tol()).unwrap().len(), 2);
    }

    #[test]
    fn singular_front_slice_is_reoriented() {
        // X1 singular, X2 invertible.
        let t = t222([[0.0, 1.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(rank_222(&t, tol()).unwrap(), 3);
        let d = decompose_222(&t, tol()).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.residual < 1e-12);
    }

    #[test]
    fn cores_223() {
        let generic = Tensor::from_fn([2, 2, 3], |i, j, k| C::new((i + 2 * j + 3 * k) as f64 * 0.3 - 1.0, (i * j + k) as f64 * 0.2)).unwrap();
        let d = decompose_223(&generic, tol()).unwrap();
        assert!(d.len() <= 3);
        assert!(d.residual < 1e-9);
        let flat = Tensor::from_fn([2, 2, 3], |i, j, k| c(((i + j) * (k + 1)) as f64)).unwrap();
        let d = decompose_223(&flat, tol()).unwrap();
        assert!(d.len() <= 2);
        assert!(d.residual < 1e-12);
        // Slices I, E12, E21 span a space whose rank-one locus is a conic.
        let s = [[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]];
        let t = Tensor::from_fn([2, 2, 3], |i, j, k| c(s[k][i][j])).unwrap();
        let d = decompose_223(&t, tol()).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.residual < 1e-9);
    }
}
