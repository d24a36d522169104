//! Cayley's hyperdeterminant as a rank test for 2x2x2 complex tensors.
//!
//! `X = [I | N]` with `N` nilpotent has vanishing hyperdeterminant and rank
//! 3, yet it is the limit of the rank-2 family `Y(a) = [I | [[0, 1], [a^2, 0]]]`.
//!
//! ```text
//! cargo run --example hyperdeterminant
//! ```

use num_complex::Complex64;
use tensorlab::complex::{hyperdeterminant, rank_222, Tolerance};
use tensorlab::text::format_complex;
use tensorlab::DenseTensor;

fn family(a: f64) -> DenseTensor<Complex64> {
    let x1 = [[1.0, 0.0], [0.0, 1.0]];
    let x2 = [[0.0, 1.0], [a * a, 0.0]];
    DenseTensor::from_fn([2, 2, 2], |i, j, k| {
        Complex64::from(if k == 0 { x1[i][j] } else { x2[i][j] })
    })
    .expect("2x2x2 is a valid format")
}

fn main() -> tensorlab::Result<()> {
    let tol = Tolerance::default();
    println!("{:>6} {:>22} {:>5}", "a", "hyperdeterminant", "rank");
    for a in [0.0, 1e-3, 0.5, 1.0, 2.0] {
        let t = family(a);
        println!(
            "{a:>6} {:>22} {:>5}",
            format_complex(hyperdeterminant(&t)?),
            rank_222(&t, tol)?
        );
    }
    Ok(())
}
