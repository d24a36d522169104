//! Decompositions of `3 x 3 x 2` tensors `[A | B]` into at most four terms.

use super::jordan::jordan_3x3;
use super::linalg::{
    self, c, condition, rank_one_factors, term, through_frame, try_inverse, unit, vector, Mat,
    Tensor, Terms, C, I, ONE, ZERO,
};
use super::rank222::finish;
use super::{Ctx, Tolerance};
use crate::error::{Error, Result};
use crate::tensor::Decomposition;

pub fn decompose_332(t: &Tensor, tol: Tolerance) -> Result<Decomposition<C>> {
    if t.dims() != [3, 3, 2] {
        return Err(Error::DimensionMismatch {
            expected: [3, 3, 2],
            found: t.dims(),
        });
    }
    tol.validate()?;
    let ctx = Ctx::new(tol, t);
    let terms = terms_332(t, &ctx)?;
    if terms.len() > 4 {
        return Err(Error::Diagnostic {
            case: format!("3 x 3 x 2 ({} terms)", terms.len()),
            residual: linalg::abs_residual(t, &terms)? / ctx.scale.max(f64::MIN_POSITIVE),
        });
    }
    finish(t, terms, tol, "3 x 3 x 2")
}

/// Each slice written as a sum of its singular triples.
fn split(t: &Tensor, ctx: &Ctx) -> Terms {
    let mut out = Vec::new();
    for (k, s) in t.frontal_slices().iter().enumerate() {
        for (a, b) in rank_one_factors(s, ctx.rank(s)) {
            out.push(term(a, b, unit(2, k)));
        }
    }
    out
}

pub(crate) fn terms_332(t: &Tensor, ctx: &Ctx) -> Result<Terms> {
    if ctx.is_zero(t) {
        return Ok(Vec::new());
    }
    let s = t.frontal_slices();
    let (ra, rb) = (ctx.rank(&s[0]), ctx.rank(&s[1]));
    if ra <= 2 && rb <= 2 {
        return Ok(split(t, ctx));
    }
    // Slice combinations tried as the invertible pivot, best conditioned
    // first.
    let pencils: [[C; 4]; 6] = [
        [ONE, ZERO, ZERO, ONE],
        [ZERO, ONE, ONE, ZERO],
        [ONE, ONE, ZERO, ONE],
        [ONE, I, ZERO, ONE],
        [ONE, -ONE, ZERO, ONE],
        [ONE, c(0.5) - I, ZERO, ONE],
    ];
    let mut ranked: Vec<(f64, Mat)> = pencils
        .iter()
        .map(|p| {
            let r = Mat::from_row_slice(2, 2, p);
            (condition(&(&s[0] * r[(0, 0)] + &s[1] * r[(0, 1)])), r)
        })
        .collect();
    ranked.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut last_err = None;
    for (cond, r) in ranked {
        if cond.is_nan() || cond > 1.0 / ctx.tol.rank_tol {
            break;
        }
        match through_frame(t, [None, None, Some(&r)], |u| jordan_route(u, ctx)) {
            Ok(terms) if linalg::abs_residual(t, &terms)? <= ctx.tol.residual_tol * ctx.scale => {
                return Ok(terms)
            }
            Ok(terms) => {
                last_err = Some(Error::Diagnostic {
                    case: "3 x 3 x 2 Jordan route".into(),
                    residual: linalg::abs_residual(t, &terms)? / ctx.scale,
                })
            }
            Err(e) => last_err = Some(e),
        }
    }
    if ra + rb <= 4 {
        return Ok(split(t, ctx));
    }
    Err(last_err.unwrap_or(Error::IllConditioned {
        what: "3 x 3 x 2 pivot slice",
        cond: f64::INFINITY,
    }))
}

/// `[P | Q]` with `P` invertible: moved to `[I | J]` with `J` the Jordan
/// form of `P^-1 Q`, then written out block by block.
fn jordan_route(t: &Tensor, ctx: &Ctx) -> Result<Terms> {
    let s = t.frontal_slices();
    let pinv = try_inverse(&s[0], "3 x 3 x 2 pivot slice")?;
    let m = &pinv * &s[1];
    let f = jordan_3x3(&m, ctx.tol.eig_cluster_tol, ctx.tol.rank_tol)?;
    let einv = try_inverse(&f.e, "Jordan basis")?;
    let left = &einv * &pinv;
    let right = f.e.transpose();
    through_frame(t, [Some(&left), Some(&right), None], |w| {
        Ok(normal_form_terms(w, &f.blocks))
    })
}

/// Terms for `[I | J]`, reading the values from `w` itself.
fn normal_form_terms(w: &Tensor, blocks: &[(usize, usize, C)]) -> Terms {
    let mut out = Vec::new();
    for &(start, size, _) in blocks {
        match size {
            1 => out.push(term(
                unit(3, start),
                unit(3, start),
                vector(&[w.get(start, start, 0), w.get(start, start, 1)]),
            )),
            2 => {
                for i in start..start + 2 {
                    out.push(term(unit(3, i), unit(3, i), vector(&[w.get(i, i, 0), w.get(i, i, 1)])));
                }
                out.push(term(
                    unit(3, start),
                    unit(3, start + 1),
                    vector(&[w.get(start, start + 1, 0), w.get(start, start + 1, 1)]),
                ));
            }
            _ => out.extend(nilpotent_block_terms(w)),
        }
    }
    out
}

/// Four terms for `[I | d I + N]` with `N` the nilpotent shift: the shift
/// part is handled on `[I | N]` and the third vectors are mapped back by
/// `(c1, c2) -> (c1, d c1 + c2)`.
fn nilpotent_block_terms(w: &Tensor) -> Terms {
    let d = (0..3).map(|i| w.get(i, i, 1)).sum::<C>() / c(3.0);
    let v = |x: [f64; 3]| linalg::real_vector(&x);
    let back = |c1: f64, c2: f64| vector(&[c(c1), d * c1 + c2]);
    vec![
        term(v([1.0, 0.5, 0.0]), v([0.0, 1.0, 0.0]), back(1.0, 1.0)),
        term(v([0.0, 1.0, 0.0]), v([0.0, -0.5, 1.0]), back(-1.0, 1.0)),
        term(v([1.0, 0.0, 0.0]), v([1.0, -1.0, 0.0]), back(1.0, 0.0)),
        term(v([0.0, 1.0, 1.0]), v([0.0, 0.0, 1.0]), back(1.0, 0.0)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slices(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> Tensor {
        let s = [a, b];
        Tensor::from_fn([3, 3, 2], |i, j, k| c(s[k][i][j])).unwrap()
    }

    const ID: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    const SHIFT: [[f64; 3]; 3] = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]];

    #[test]
    fn nilpotent_four_term_sum() {
        let t = slices(ID, SHIFT);
        let terms = nilpotent_block_terms(&t);
        assert_eq!(linalg::abs_residual(&t, &terms).unwrap(), 0.0);
    }

    #[test]
    fn jordan_cases() {
        let tol = Tolerance::default();
        let cases = [
            (slices(ID, [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]), 3),
            (slices(ID, [[2.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 5.0]]), 4),
            (slices(ID, [[4.0, 1.0, 0.0], [0.0, 4.0, 1.0], [0.0, 0.0, 4.0]]), 4),
            (slices(SHIFT, ID), 4),
            (slices(SHIFT, [[0.0; 3]; 3]), 2),
        ];
        for (t, max) in cases {
            let d = decompose_332(&t, tol).unwrap();
            assert!(d.len() <= max, "{} terms", d.len());
            assert!(d.residual < 1e-9, "residual {}", d.residual);
        }
    }

    #[test]
    fn both_slices_singular() {
        let t = slices(SHIFT, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        let d = decompose_332(&t, Tolerance::default()).unwrap();
        assert!(d.len() <= 4);
        assert!(d.residual < 1e-12);
    }

    #[test]
    fn wrong_format() {
        let t = Tensor::zeros([3, 2, 3]).unwrap();
        assert!(decompose_332(&t, Tolerance::default()).is_err());
    }
}
