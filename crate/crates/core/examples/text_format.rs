//! Reading and writing tensors and decompositions as text.
//!
//! ```text
//! cargo run --example text_format
//! ```

use tensorlab::complex::{decompose, Tolerance};
use tensorlab::text::{parse_complex_tensor, parse_decomposition, parse_f2_tensor, write_decomposition};

fn main() -> tensorlab::Result<()> {
    let t = parse_complex_tensor(
        "2 3 1   # a 2x3 matrix viewed as a tensor
         1+2i  0   -i
         2     1.5  0",
    )?;
    let d = decompose(&t, Tolerance::default())?;
    let written = write_decomposition(&d);
    print!("{written}");
    assert_eq!(parse_decomposition(&written)?.terms, d.terms);

    let f = parse_f2_tensor("3 3 3\n0x4000001")?;
    println!("F2 tensor with {} ones", f.entries().iter().filter(|x| x.0).count());

    match parse_complex_tensor("1 1 2\n1 2+") {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!("`2+` is not a number"),
    }
    Ok(())
}
