//! Full orbit and rank census of 3x3x3 tensors over F2.
//!
//! ```text
//! cargo run --release --example f2_census [-- --low-memory] [-- --threads N]
//! ```

use std::time::Instant;

use tensorlab::f2::{table, CensusOptions, CensusTables};

fn main() -> tensorlab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let low_memory = args.iter().any(|a| a == "--low-memory");
    let threads = args
        .iter()
        .position(|a| a == "--threads")
        .and_then(|i| args.get(i + 1))
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);

    let start = Instant::now();
    let tables = CensusTables::compute([3, 3, 3], CensusOptions { low_memory, threads })?;
    println!(
        "small={} large={} max_rank={}",
        tables.orbits().len(),
        tables.large_orbits().len(),
        tables.max_rank()
    );
    print!("{}", table::summary_block(&tables, table::TableFormat::Dots));
    eprintln!("census took {:.1?}", start.elapsed());
    Ok(())
}
