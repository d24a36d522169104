//! Classification of tensors over F2 by orbit and rank.

pub mod cache;
pub mod census;
pub mod group;
pub mod oracle;
pub mod table;

pub use cache::{default_cache_path, read_cache, write_cache};
pub use census::{CensusOptions, CensusTables, LargeOrbit, OrbitRecord, RankSummary};
pub use group::{gl3_f2_elements, spin_orbit, BitGroupElement, BitMatrix};
pub use oracle::{oracle_rank, oracle_ranks};
pub use table::{emit_table, TableFormat};
