//! 3x3x3 complex tensors into at most five terms, with the reduction steps.
//!
//! ```text
//! cargo run --example decompose_333
//! ```

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tensorlab::complex::{decompose_333_traced, Tolerance};
use tensorlab::DenseTensor;

type Rows = [[f64; 3]; 3];

fn slices(s: [Rows; 3]) -> DenseTensor<Complex64> {
    DenseTensor::from_fn([3, 3, 3], |i, j, k| Complex64::from(s[k][i][j])).expect("3x3x3")
}

fn main() -> tensorlab::Result<()> {
    let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let shift = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]];
    let e12 = [[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
    let e13 = [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let random = DenseTensor::from_fn([3, 3, 3], |_, _, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })?;

    let cases = [
        ("[shift | shift | I]", slices([shift, shift, id])),
        ("[I | E12 | E13]", slices([id, e12, e13])),
        ("Gaussian", random),
    ];
    for (name, t) in cases {
        let (d, path) = decompose_333_traced(&t, Tolerance::default())?;
        println!("{name}: {} terms, residual {:.2e}", d.len(), d.residual);
        println!("  steps: {}", path.join(" -> "));
    }
    Ok(())
}
