//! The `tensorlab` command line.
//!
//! [`run`] does all the work and returns the text for both streams together
//! with the exit status, so commands can be exercised in-process. The exit
//! status is 0 exactly when the command's postcondition held, 1 for a
//! failed check or runtime error and 2 for a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::code::{self, dots_pattern};
use crate::complex::{self, Tolerance};
use crate::error::{Error, Result};
use crate::f2::{self, cache::CACHE_ENV, CensusOptions, CensusTables, TableFormat};
use crate::tensor::Dims;
use crate::text;

#[derive(Parser, Debug)]
#[command(name = "tensorlab", version, about = "Rank and decompositions of small 3-way tensors")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Format of the F2 commands, each size in 1..=3.
    #[arg(long, num_args = 3, value_names = ["P", "Q", "R"], global = true,
          value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dims: Option<Vec<u8>>,
    /// Census cache file.
    #[arg(long, env = CACHE_ENV, global = true)]
    pub cache: Option<PathBuf>,
    /// Table output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Dots, global = true)]
    pub format: FormatArg,
    /// Re-spin orbits while ranking instead of storing the link array.
    #[arg(long, global = true)]
    pub low_memory: bool,
    /// Worker threads for the census; output does not depend on it.
    #[arg(long, default_value_t = 1, global = true,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Relative threshold below which singular values count as zero.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Largest accepted relative residual.
    #[arg(long, global = true)]
    pub tol_residual: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Tsv,
    Dots,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Tsv => TableFormat::Tsv,
            FormatArg::Dots => TableFormat::Dots,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify every F2 tensor of the format and store the tables.
    Census,
    /// Rank and orbit of one F2 tensor.
    RankF2 {
        /// Code (decimal or 0x-hex) or a tensor file.
        input: String,
    },
    /// Orbit of one F2 tensor.
    OrbitF2 {
        /// Code (decimal or 0x-hex) or a tensor file.
        input: String,
        /// Also print every code in the small orbit.
        #[arg(long)]
        list: bool,
    },
    /// Large-orbit table and per-rank summary from the cache.
    Table,
    /// Decomposition of a complex tensor read from a file (`-` for stdin).
    Decompose { input: PathBuf },
    /// Rank of a complex 2 x 2 x 2 tensor.
    Rank222 { input: PathBuf },
    /// Cayley hyperdeterminant of a complex 2 x 2 x 2 tensor.
    Hyperdet { input: PathBuf },
    /// Residual of a decomposition file against a tensor file.
    Verify {
        tensor: PathBuf,
        decomposition: PathBuf,
    },
}

/// Everything a command wrote, and its exit status.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: rendered, ..Outcome::default() }
            } else {
                Outcome { stderr: rendered, code, ..Outcome::default() }
            };
        }
    };
    let mut out = Outcome::default();
    match execute(&cli, &mut out) {
        Ok(true) => {}
        Ok(false) => out.code = 1,
        Err(e) => {
            let _ = writeln!(out.stderr, "error: {e}");
            out.code = 1;
        }
    }
    out
}

impl GlobalArgs {
    fn dims(&self) -> Dims {
        match self.dims.as_deref() {
            Some([p, q, r]) => [*p as usize, *q as usize, *r as usize],
            _ => [3, 3, 3],
        }
    }

    fn cache_path(&self) -> PathBuf {
        self.cache.clone().unwrap_or_else(|| f2::default_cache_path(self.dims()))
    }

    fn tolerance(&self) -> Result<Tolerance> {
        let d = Tolerance::default();
        Tolerance::new(
            self.tol_rank.unwrap_or(d.rank_tol),
            d.eig_cluster_tol,
            self.tol_residual.unwrap_or(d.residual_tol),
        )
    }

    fn census_options(&self) -> CensusOptions {
        CensusOptions {
            low_memory: self.low_memory,
            threads: self.threads as usize,
        }
    }
}

/// `Ok(false)` when the command ran but its check failed.
fn execute(cli: &Cli, out: &mut Outcome) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Census => cmd_census(g, out),
        Command::RankF2 { input } => cmd_rank_f2(g, input, out),
        Command::OrbitF2 { input, list } => cmd_orbit_f2(g, input, *list, out),
        Command::Table => cmd_table(g, out),
        Command::Decompose { input } => cmd_decompose(g, input, out),
        Command::Rank222 { input } => {
            let t = read_complex_222(input)?;
            let _ = writeln!(out.stdout, "rank {}", complex::rank_222(&t, g.tolerance()?)?);
            Ok(true)
        }
        Command::Hyperdet { input } => {
            let t = read_complex_222(input)?;
            let delta = complex::hyperdeterminant(&t)?;
            let _ = writeln!(out.stdout, "hyperdeterminant {}", text::format_complex(delta));
            Ok(true)
        }
        Command::Verify { tensor, decomposition } => {
            let t = text::parse_complex_tensor(&read_input(tensor)?)?;
            let d = text::parse_decomposition(&read_input(decomposition)?)?;
            let tol = g.tolerance()?;
            let r = complex::relative_residual(&t, &d)?;
            let ok = r <= tol.residual_tol;
            let _ = writeln!(out.stdout, "terms {}\nresidual {r:e}", d.len());
            let _ = writeln!(out.stdout, "{}", if ok { "ok" } else { "residual exceeds tolerance" });
            Ok(ok)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        Ok(std::io::read_to_string(std::io::stdin())?)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_complex_222(path: &Path) -> Result<crate::DenseTensor<num_complex::Complex64>> {
    let t = text::parse_complex_tensor(&read_input(path)?)?;
    if t.dims() != [2, 2, 2] {
        return Err(Error::DimensionMismatch { expected: [2, 2, 2], found: t.dims() });
    }
    Ok(t)
}

/// Census tables from the cache, computing and storing them on a miss.
fn load_or_compute(g: &GlobalArgs, out: &mut Outcome) -> Result<CensusTables> {
    let dims = g.dims();
    let path = g.cache_path();
    if path.exists() {
        let tables = f2::read_cache(&path, dims)?;
        let _ = writeln!(out.stderr, "loaded census from {}", path.display());
        return Ok(tables);
    }
    let start = Instant::now();
    let tables = CensusTables::compute(dims, g.census_options())?;
    f2::write_cache(&tables, &path)?;
    let _ = writeln!(
        out.stderr,
        "computed census in {:.1?}, stored in {}",
        start.elapsed(),
        path.display()
    );
    Ok(tables)
}

fn cmd_census(g: &GlobalArgs, out: &mut Outcome) -> Result<bool> {
    let tables = load_or_compute(g, out)?;
    let _ = writeln!(
        out.stdout,
        "small={} large={} max_rank={}",
        tables.orbits().len(),
        tables.large_orbits().len(),
        tables.max_rank()
    );
    out.stdout.push_str(&f2::table::summary_block(&tables, g.format.into()));
    Ok(true)
}

fn cmd_table(g: &GlobalArgs, out: &mut Outcome) -> Result<bool> {
    let path = g.cache_path();
    if !path.exists() {
        return Err(Error::Cache(format!(
            "{} not found; run `tensorlab census` first",
            path.display()
        )));
    }
    let tables = f2::read_cache(&path, g.dims())?;
    out.stdout.push_str(&f2::emit_table(&tables, g.format.into()));
    Ok(true)
}

/// A code given inline, or read from a tensor file.
fn f2_code(g: &GlobalArgs, input: &str) -> Result<u32> {
    let dims = g.dims();
    let code = match text::parse_code(input) {
        Some(c) => c,
        None => {
            let t = text::parse_f2_tensor(&read_input(Path::new(input))?)?;
            if t.dims() != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: t.dims() });
            }
            code::encode(&t) as u64
        }
    };
    let bits = f2::census::format_bits(dims)?;
    if code >> bits != 0 {
        return Err(Error::CodeOutOfRange { code, dims });
    }
    Ok(code as u32)
}

fn cmd_rank_f2(g: &GlobalArgs, input: &str, out: &mut Outcome) -> Result<bool> {
    let code = f2_code(g, input)?;
    if code == 0 {
        let _ = writeln!(out.stdout, "code 0\nrank 0\norbit none");
        return Ok(true);
    }
    let tables = load_or_compute(g, out)?;
    let dims = g.dims();
    let small = tables.orbit_of(code)?.expect("nonzero code has an orbit");
    let large = tables.large_orbit_of(code)?.expect("nonzero code has an orbit");
    let _ = writeln!(out.stdout, "code {code}\nrank {}", tables.rank_of(code)?);
    let _ = writeln!(out.stdout, "small_orbit {}\nlarge_orbit {}", small.index, large.index);
    let _ = writeln!(
        out.stdout,
        "canonical {} {}",
        large.canonical,
        dots_pattern(dims, large.canonical)
    );
    Ok(true)
}

fn cmd_orbit_f2(g: &GlobalArgs, input: &str, list: bool, out: &mut Outcome) -> Result<bool> {
    let code = f2_code(g, input)?;
    let dims = g.dims();
    if code == 0 {
        let _ = writeln!(out.stdout, "code 0\norbit none\nsize 1");
        return Ok(true);
    }
    let tables = load_or_compute(g, out)?;
    let small = tables.orbit_of(code)?.expect("nonzero code has an orbit");
    let large = tables.large_orbit_of(code)?.expect("nonzero code has an orbit");
    let _ = writeln!(out.stdout, "code {code}\nrank {}", small.rank);
    let _ = writeln!(
        out.stdout,
        "small_orbit {} size {} canonical {}",
        small.index,
        small.size,
        dots_pattern(dims, small.canonical)
    );
    let _ = writeln!(
        out.stdout,
        "large_orbit {} size {} canonical {}",
        large.index,
        large.size,
        dots_pattern(dims, large.canonical)
    );
    if list {
        let mut members = f2::spin_orbit(dims, code, &f2::group::product_generators(dims));
        members.sort_unstable();
        for m in members {
            let _ = writeln!(out.stdout, "{m}");
        }
    }
    Ok(true)
}

fn cmd_decompose(g: &GlobalArgs, input: &Path, out: &mut Outcome) -> Result<bool> {
    let t = text::parse_complex_tensor(&read_input(input)?)?;
    if let Some(dims) = g.dims.as_ref().map(|_| g.dims()) {
        if dims != t.dims() {
            return Err(Error::DimensionMismatch { expected: dims, found: t.dims() });
        }
    }
    let tol = g.tolerance()?;
    let d = complex::decompose(&t, tol)?;
    out.stdout.push_str(&text::write_decomposition(&d));
    if d.residual > tol.residual_tol {
        let _ = writeln!(
            out.stderr,
            "residual {:e} exceeds tolerance {:e}",
            d.residual, tol.residual_tol
        );
        return Ok(false);
    }
    Ok(true)
}
