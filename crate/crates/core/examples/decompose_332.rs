//! 3x3x2 tensors `[A | B]` through the Jordan form of the pencil.
//!
//! ```text
//! cargo run --example decompose_332
//! ```

use num_complex::Complex64;
use tensorlab::complex::{decompose_332, Tolerance};
use tensorlab::text::write_decomposition;
use tensorlab::DenseTensor;

type Rows = [[f64; 3]; 3];

const ID: Rows = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn pencil(a: Rows, b: Rows) -> DenseTensor<Complex64> {
    DenseTensor::from_fn([3, 3, 2], |i, j, k| Complex64::from([a, b][k][i][j]))
        .expect("3x3x2 is a valid format")
}

fn main() -> tensorlab::Result<()> {
    let cases = [
        ("diagonal", pencil(ID, [[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.5]])),
        ("one 2-block", pencil(ID, [[3.0, 1.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 1.0]])),
        ("one 3-block", pencil(ID, [[4.0, 1.0, 0.0], [0.0, 4.0, 1.0], [0.0, 0.0, 4.0]])),
        (
            "singular slices",
            pencil(
                [[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [1.0, 3.0, 1.0]],
                [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]],
            ),
        ),
    ];
    for (name, t) in cases {
        let d = decompose_332(&t, Tolerance::default())?;
        println!("# {name}: {} terms", d.len());
        print!("{}", write_decomposition(&d));
    }
    Ok(())
}
