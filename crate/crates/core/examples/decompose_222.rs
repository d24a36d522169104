//! Minimal decompositions of 2x2x2 complex tensors, one per rank.
//!
//! ```text
//! cargo run --example decompose_222
//! ```

use num_complex::Complex64;
use tensorlab::complex::{decompose_222, Tolerance};
use tensorlab::text::write_decomposition;
use tensorlab::DenseTensor;

fn tensor(entries: [f64; 8]) -> DenseTensor<Complex64> {
    DenseTensor::new([2, 2, 2], entries.map(Complex64::from).to_vec()).expect("8 entries")
}

fn main() -> tensorlab::Result<()> {
    // Entries in lex order x111, x112, x121, ..., x222.
    let cases = [
        ("zero", [0.0; 8]),
        ("simple", [1.0, 2.0, 0.0, 0.0, 3.0, 6.0, 0.0, 0.0]),
        ("superdiagonal", [2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
        ("generic", [1.0, 0.5, -2.0, 1.0, 0.25, 3.0, 1.0, -1.0]),
        ("[I | N]", [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0]),
    ];
    for (name, entries) in cases {
        let d = decompose_222(&tensor(entries), Tolerance::default())?;
        println!("# {name}: rank {}", d.len());
        print!("{}", write_decomposition(&d));
    }
    Ok(())
}
