//! Invariants of the tensor operations, checked on generated inputs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use tensorlab::code::{decode, encode};
use tensorlab::complex::{self, decompose, hyperdeterminant, jordan_3x3, rank_222, Tolerance};
use tensorlab::f2::group::gl_elements;
use tensorlab::f2::oracle_rank;
use tensorlab::tensor::DIRECTION_PERMUTATIONS;
use tensorlab::{DenseTensor, GroupElement, SimpleTerm, F2};

type C = Complex64;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 96,
        ..ProptestConfig::default()
    }
}

fn complex() -> impl Strategy<Value = C> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C::new(re, im))
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec(complex(), n)
}

fn complex_tensor(dims: [usize; 3]) -> impl Strategy<Value = DenseTensor<C>> {
    complex_vec(dims.iter().product()).prop_map(move |v| DenseTensor::new(dims, v).unwrap())
}

/// Unitary factor of a QR, with columns scaled into `[0.5, 2]`; condition at
/// most 4.
fn well_conditioned(n: usize) -> impl Strategy<Value = DMatrix<C>> {
    (complex_vec(n * n), prop::collection::vec(0.5..2.0f64, n)).prop_map(move |(v, s)| {
        let q = DMatrix::from_vec(n, n, v).qr().q();
        q * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, s.into_iter().map(C::from)))
    })
}

fn f2_element(dims: [usize; 3], permute: bool) -> impl Strategy<Value = GroupElement<F2>> {
    let pick = |n: usize| {
        let all = gl_elements(n);
        (0..all.len()).prop_map(move |i| all[i].to_dmatrix())
    };
    (pick(dims[0]), pick(dims[1]), pick(dims[2]), 0..6usize).prop_map(move |(a, b, c, p)| {
        let perm = (permute && p > 0).then(|| DIRECTION_PERMUTATIONS[p]);
        GroupElement::new([a, b, c], perm).unwrap()
    })
}

fn sum_of_terms(dims: [usize; 3], terms: &[(Vec<C>, Vec<C>, Vec<C>)]) -> DenseTensor<C> {
    DenseTensor::from_fn(dims, |i, j, k| terms.iter().map(|(a, b, c)| a[i] * b[j] * c[k]).sum())
        .unwrap()
}

fn random_terms(dims: [usize; 3], max: usize) -> impl Strategy<Value = Vec<(Vec<C>, Vec<C>, Vec<C>)>> {
    prop::collection::vec((complex_vec(dims[0]), complex_vec(dims[1]), complex_vec(dims[2])), 0..=max)
}

fn max_diff(x: &DenseTensor<C>, y: &DenseTensor<C>) -> f64 {
    x.sub(y).unwrap().max_norm()
}

#[test]
fn code_round_trip_222_exhaustive() {
    for code in 0..256u64 {
        let t = decode([2, 2, 2], code).unwrap();
        assert_eq!(encode(&t) as u64, code);
    }
}

#[test]
fn f2_rank_invariant_under_every_element_222() {
    // Ranks of all 256 tensors, then every element of GL_2^3 x S_3 applied
    // to a spread of codes.
    let ranks: Vec<u8> = (0..256u64).map(|c| oracle_rank([2, 2, 2], c).unwrap()).collect();
    let gl2 = gl_elements(2);
    assert_eq!(gl2.len(), 6);
    for a in &gl2 {
        for b in &gl2 {
            for c in &gl2 {
                for p in DIRECTION_PERMUTATIONS {
                    let g = GroupElement::new([a.to_dmatrix(), b.to_dmatrix(), c.to_dmatrix()], Some(p)).unwrap();
                    for code in (1..256u64).step_by(7) {
                        let moved = decode([2, 2, 2], code).unwrap().act(&g).unwrap();
                        assert_eq!(ranks[encode(&moved) as usize], ranks[code as usize]);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn code_round_trip_333(code in 0u64..(1 << 27)) {
        let t = decode([3, 3, 3], code).unwrap();
        prop_assert_eq!(encode(&t) as u64, code);
        prop_assert_eq!(t.get(0, 0, 0) == F2::ONE, code >> 26 == 1);
        prop_assert_eq!(t.get(2, 2, 2) == F2::ONE, code & 1 == 1);
    }

    #[test]
    fn f2_act_then_inverse(code in 0u64..(1 << 27), g in f2_element([3, 3, 3], true)) {
        let t = decode([3, 3, 3], code).unwrap();
        prop_assert_eq!(t.act(&g).unwrap().act(&g.inverse()).unwrap(), t);
    }

    #[test]
    fn f2_act_then_inverse_mixed_dims(code in 0u64..(1 << 12), g in f2_element([2, 3, 2], false)) {
        let t = decode([2, 3, 2], code).unwrap();
        prop_assert_eq!(t.act(&g).unwrap().act(&g.inverse()).unwrap(), t);
    }

    #[test]
    fn f2_rank_invariant_223(code in 1u64..(1 << 12), g in f2_element([2, 2, 3], false)) {
        let moved = encode(&decode([2, 2, 3], code).unwrap().act(&g).unwrap()) as u64;
        prop_assert_eq!(oracle_rank([2, 2, 3], moved).unwrap(), oracle_rank([2, 2, 3], code).unwrap());
    }

    #[test]
    fn complex_act_then_inverse(
        t in complex_tensor([3, 2, 3]),
        a in well_conditioned(3), b in well_conditioned(2), c in well_conditioned(3),
    ) {
        let g = GroupElement::new([a, b, c], Some([2, 0, 1])).unwrap();
        let back = t.act(&g).unwrap().act(&g.inverse()).unwrap();
        prop_assert!(max_diff(&back, &t) < 1e-10);
    }

    #[test]
    fn act_on_a_simple_term(
        x in complex_vec(3), y in complex_vec(3), z in complex_vec(2),
        a in well_conditioned(3), b in well_conditioned(3), c in well_conditioned(2),
    ) {
        let t = SimpleTerm::from_slices(&x, &y, &z);
        prop_assume!(t.is_ok());
        let t = t.unwrap();
        let g = GroupElement::new([a.clone(), b.clone(), c.clone()], None).unwrap();
        let moved = SimpleTerm::new(&a * &t.a, &b * &t.b, &c * &t.c).unwrap();
        prop_assert!(max_diff(&t.to_tensor().act(&g).unwrap(), &moved.to_tensor()) < 1e-12);
    }

    #[test]
    fn rank_222_of_generated_sums(terms in random_terms([2, 2, 2], 2)) {
        let t = sum_of_terms([2, 2, 2], &terms);
        let tol = Tolerance::default();
        prop_assert_eq!(rank_222(&t, tol).unwrap(), terms.len());
        let d = complex::decompose_222(&t, tol).unwrap();
        prop_assert_eq!(d.len(), terms.len());
    }

    #[test]
    fn rank_222_is_invariant(
        a in well_conditioned(2), b in well_conditioned(2), c in well_conditioned(2), p in 0..6usize,
    ) {
        // The degenerate pencil [I | N] has rank 3; so has every image.
        let x = DenseTensor::from_fn([2, 2, 2], |i, j, k| {
            C::from(match (i, j, k) { (0, 0, 0) | (1, 1, 0) | (0, 1, 1) => 1.0, _ => 0.0 })
        }).unwrap();
        let g = GroupElement::new([a, b, c], Some(DIRECTION_PERMUTATIONS[p])).unwrap();
        let moved = x.act(&g).unwrap();
        prop_assert_eq!(rank_222(&moved, Tolerance::default()).unwrap(), 3);
        prop_assert!(hyperdeterminant(&moved).unwrap().norm() < 1e-9);
    }

    #[test]
    fn jordan_recovers_block_structure(
        e in well_conditioned(3),
        shape in 0..5usize,
        l in complex(),
    ) {
        // Eigenvalues kept apart so that distinct ones are not merged.
        let lambda = [l, l + C::new(3.0, 0.5), l + C::new(-1.5, 3.0)];
        let (diag, sup, sizes): ([C; 3], [f64; 2], Vec<usize>) = match shape {
            0 => (lambda, [0.0, 0.0], vec![1, 1, 1]),
            1 => ([lambda[0], lambda[0], lambda[1]], [1.0, 0.0], vec![1, 2]),
            2 => ([lambda[0]; 3], [1.0, 1.0], vec![3]),
            3 => ([lambda[0], lambda[0], lambda[1]], [0.0, 0.0], vec![1, 1, 1]),
            _ => ([lambda[0]; 3], [1.0, 0.0], vec![1, 2]),
        };
        let mut j = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&diag));
        j[(0, 1)] = C::from(sup[0]);
        j[(1, 2)] = C::from(sup[1]);
        let m = &e * &j * e.clone().try_inverse().unwrap();
        let f = jordan_3x3(&m, 1e-6, 1e-9).unwrap();
        prop_assert!(f.residual(&m) < 1e-6, "residual {}", f.residual(&m));
        let mut got: Vec<usize> = f.blocks.iter().map(|b| b.1).collect();
        got.sort_unstable();
        prop_assert_eq!(got, sizes);
    }

    #[test]
    fn generated_sums_stay_within_bounds(
        which in 0..3usize,
        terms in random_terms([3, 3, 3], 5),
    ) {
        let (dims, bound) = [([2, 2, 2], 3), ([3, 3, 2], 4), ([3, 3, 3], 5)][which];
        let terms: Vec<_> = terms
            .into_iter()
            .map(|(a, b, c)| (a[..dims[0]].to_vec(), b[..dims[1]].to_vec(), c[..dims[2]].to_vec()))
            .collect();
        let t = sum_of_terms(dims, &terms);
        let d = decompose(&t, Tolerance::default()).unwrap();
        prop_assert!(d.len() <= bound, "{} terms", d.len());
        if dims == [2, 2, 2] {
            // Exact rank, never more than the generating terms.
            prop_assert!(d.len() <= terms.len());
        }
        prop_assert!(d.residual <= 1e-6, "residual {}", d.residual);
    }

    #[test]
    fn small_formats_embed(t in complex_tensor([2, 3, 1]), u in complex_tensor([1, 3, 3])) {
        for x in [t, u] {
            let d = decompose(&x, Tolerance::default()).unwrap();
            prop_assert!(d.len() <= 3);
            prop_assert!(d.residual <= 1e-6);
        }
    }
}
