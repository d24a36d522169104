//! Text rendering of the large-orbit table and the per-rank summary.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::code::dots_pattern;
use crate::error::Error;

use super::census::{CensusTables, RankSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TableFormat {
    /// `index rank size pattern` with `.` for 0, then an aligned summary.
    #[default]
    Dots,
    /// Tab-separated with a header line.
    Tsv,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dots" => Ok(TableFormat::Dots),
            "tsv" => Ok(TableFormat::Tsv),
            other => Err(Error::Precondition(format!("unknown table format {other:?}"))),
        }
    }
}

/// Percentage of all `2^n` codes, four decimals.
pub fn percent(count: u64, code_count: usize) -> String {
    format!("{:.4}", count as f64 / code_count as f64 * 100.0)
}

/// One line per large orbit, in index order.
pub fn table_rows(t: &CensusTables, format: TableFormat) -> Vec<String> {
    let dims = t.dims();
    t.large_orbits()
        .iter()
        .map(|l| {
            let pattern = dots_pattern(dims, l.canonical);
            match format {
                TableFormat::Dots => format!("{} {} {} {}", l.index, l.rank, l.size, pattern),
                TableFormat::Tsv => format!(
                    "{}\t{}\t{}\t{}\t{}",
                    l.index, l.rank, l.size, l.canonical, pattern
                ),
            }
        })
        .collect()
}

/// The per-rank block: rank, # small, # large, # tensors, percent.
pub fn summary_block(t: &CensusTables, format: TableFormat) -> String {
    let rows = t.rank_summary();
    let n = t.code_count();
    type Column<'a> = (&'a str, Box<dyn Fn(&RankSummary) -> String>);
    let cols: [Column; 5] = [
        ("rank", Box::new(|r| r.rank.to_string())),
        ("# small", Box::new(|r| r.small.to_string())),
        ("# large", Box::new(|r| r.large.to_string())),
        ("# tensors", Box::new(|r| r.tensors.to_string())),
        ("percent", Box::new(move |r| percent(r.tensors, n))),
    ];
    let mut out = String::new();
    for (label, f) in &cols {
        let cells: Vec<String> = rows.iter().map(f).collect();
        match format {
            TableFormat::Tsv => {
                let _ = writeln!(out, "{label}\t{}", cells.join("\t"));
            }
            TableFormat::Dots => {
                let _ = write!(out, "{label:<10}");
                for c in cells {
                    let _ = write!(out, " {c:>9}");
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Full table: header (TSV only), rows, blank line, summary.
pub fn emit_table(t: &CensusTables, format: TableFormat) -> String {
    let mut out = String::new();
    if format == TableFormat::Tsv {
        out.push_str("index\trank\tsize\tcanonical\tpattern\n");
    }
    for row in table_rows(t, format) {
        out.push_str(&row);
        out.push('\n');
    }
    out.push('\n');
    out.push_str(&summary_block(t, format));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::census::CensusOptions;

    #[test]
    fn percent_rounding() {
        assert_eq!(percent(343, 1 << 27), "0.0003");
        assert_eq!(percent(1, 1 << 27), "0.0000");
        assert_eq!(percent(83670048, 1 << 27), "62.3390");
    }

    #[test]
    fn small_format_table() {
        let t = CensusTables::compute([2, 2, 2], CensusOptions::default()).unwrap();
        let rows = table_rows(&t, TableFormat::Dots);
        assert_eq!(rows[0], "1 1 27 .......1");
        let tsv = emit_table(&t, TableFormat::Tsv);
        assert!(tsv.starts_with("index\trank\tsize\tcanonical\tpattern\n1\t1\t27\t1\t.......1\n"));
        assert_eq!(emit_table(&t, TableFormat::Dots), emit_table(&t, TableFormat::Dots));
        assert_eq!("tsv".parse::<TableFormat>().unwrap(), TableFormat::Tsv);
        assert!("csv".parse::<TableFormat>().is_err());
    }
}
