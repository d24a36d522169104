//! Jordan normal form of small complex matrices, including defective ones.
//!
//! ```text
//! cargo run --example jordan
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use tensorlab::complex::jordan_3x3;
use tensorlab::text::format_complex;

fn main() -> tensorlab::Result<()> {
    let basis = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, -1.0, 1.0, 0.0, 1.0])
        .map(Complex64::from);
    let inv = basis.clone().try_inverse().expect("invertible basis");
    let forms = [
        ("distinct", [1.0, 2.0, 3.0], [0.0, 0.0]),
        ("2-block", [2.0, 2.0, 5.0], [1.0, 0.0]),
        ("3-block", [4.0, 4.0, 4.0], [1.0, 1.0]),
        ("derogatory", [1.0, 1.0, 1.0], [0.0, 1.0]),
    ];
    for (name, diag, sup) in forms {
        let mut j = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&diag)).map(Complex64::from);
        j[(0, 1)] = sup[0].into();
        j[(1, 2)] = sup[1].into();
        let m = &basis * j * &inv;
        let f = jordan_3x3(&m, 1e-6, 1e-9)?;
        let blocks: Vec<String> = f
            .blocks
            .iter()
            .map(|&(_, size, l)| format!("{size}x{size} at {}", format_complex(l)))
            .collect();
        println!("{name:>10}: {} (residual {:.1e})", blocks.join(", "), f.residual(&m));
    }
    Ok(())
}
