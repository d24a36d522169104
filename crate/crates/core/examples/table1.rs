//! Large-orbit table of 3x3x3 F2 tensors, from a cache file.
//!
//! The first run computes the census (about a minute in release mode) and
//! stores it; later runs only read the file.
//!
//! ```text
//! cargo run --release --example table1 [-- tsv]
//! ```

use std::path::Path;

use tensorlab::f2::{default_cache_path, emit_table, read_cache, write_cache};
use tensorlab::f2::{CensusOptions, CensusTables, TableFormat};

fn main() -> tensorlab::Result<()> {
    let dims = [3, 3, 3];
    let format: TableFormat = std::env::args().nth(1).as_deref().unwrap_or("dots").parse()?;
    let path = default_cache_path(dims);
    let tables = if Path::new(&path).exists() {
        read_cache(&path, dims)?
    } else {
        let t = CensusTables::compute(dims, CensusOptions::default())?;
        write_cache(&t, &path)?;
        t
    };
    print!("{}", emit_table(&tables, format));
    Ok(())
}
