use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions {0:?}: each direction must have size 1..=3")]
    InvalidDims([usize; 3]),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: [usize; 3], found: [usize; 3] },

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("index {index} out of range for direction {direction} of size {len} (1-based)")]
    IndexOutOfRange {
        direction: usize,
        index: usize,
        len: usize,
    },

    #[error("non-finite entry at position {0} (1-based)")]
    NonFinite(usize),

    #[error("a simple tensor needs nonzero vectors (vector for direction {0} is zero)")]
    ZeroVector(usize),

    #[error("matrix for direction {0} is singular")]
    SingularMatrix(usize),

    #[error("code {code:#x} out of range for a {dims:?} tensor")]
    CodeOutOfRange { code: u64, dims: [usize; 3] },

    #[error("format {dims:?} has {bits} entries; exhaustive search is limited to {max}")]
    FormatTooLarge {
        dims: [usize; 3],
        bits: usize,
        max: usize,
    },

    #[error("too many orbits for the 8-bit orbit table ({0})")]
    TooManyOrbits(usize),

    #[error("could not allocate {bytes} bytes for census tables")]
    Alloc { bytes: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cache file: {0}")]
    Cache(String),

    #[error("ill-conditioned {what} (condition estimate {cond:.3e})")]
    IllConditioned { what: &'static str, cond: f64 },

    #[error("pencil determinant is a nonzero constant")]
    DegeneratePencil,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("decomposition failed in {case} (residual {residual:.3e})")]
    Diagnostic { case: String, residual: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
