//! Binary persistence of census tables.
//!
//! Layout, little-endian without padding:
//!
//! ```text
//! "F2CENSUS"  version: u16  dims: 3 x u8
//! orbit_id: (2^n - 1) x u8     codes 1 ..= 2^n - 1
//! rank:     (2^n - 1) x u8
//! count: u16
//! count x { index: u16, canonical: u32, size: u32, rank: u8, large_index: u16 }
//! ```
//!
//! Writers go through a temporary file renamed into place, so readers never
//! observe a partial file. A sidecar `.lock` file carries an advisory lock:
//! exclusive for writers, shared for readers.

use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::tensor::Dims;

use super::census::{format_bits, CensusTables, OrbitRecord};

pub const MAGIC: &[u8; 8] = b"F2CENSUS";
pub const VERSION: u16 = 1;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "TENSORLAB_CACHE";

/// `$TENSORLAB_CACHE` if set, otherwise `tensorlab-census-PxQxR.bin` in the
/// working directory.
pub fn default_cache_path(dims: Dims) -> PathBuf {
    match std::env::var_os(CACHE_ENV) {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => PathBuf::from(format!(
            "tensorlab-census-{}x{}x{}.bin",
            dims[0], dims[1], dims[2]
        )),
    }
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn open_lock(path: &Path) -> Result<File> {
    Ok(OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(sidecar(path, ".lock"))?)
}

pub fn write_cache(tables: &CensusTables, path: &Path) -> Result<()> {
    let lock = open_lock(path)?;
    lock.lock()?;
    let tmp = sidecar(path, ".tmp");
    let result = write_to(tables, &tmp).and_then(|()| Ok(fs::rename(&tmp, path)?));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn write_to(tables: &CensusTables, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    let dims = tables.dims();
    w.write_all(&[dims[0] as u8, dims[1] as u8, dims[2] as u8])?;
    w.write_all(&tables.orbit_ids()[1..])?;
    w.write_all(&tables.ranks()[1..])?;
    let orbits = tables.orbits();
    w.write_all(&(orbits.len() as u16).to_le_bytes())?;
    for o in orbits {
        w.write_all(&o.index.to_le_bytes())?;
        w.write_all(&o.canonical.to_le_bytes())?;
        w.write_all(&o.size.to_le_bytes())?;
        w.write_all(&[o.rank])?;
        w.write_all(&o.large_index.to_le_bytes())?;
    }
    w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    Ok(())
}

fn read_exact<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Cache(format!("truncated file: {e}")))?;
    Ok(buf)
}

/// Loads tables, checking that they describe `dims`.
pub fn read_cache(path: &Path, dims: Dims) -> Result<CensusTables> {
    let lock = open_lock(path)?;
    lock.lock_shared()?;
    let mut r = BufReader::new(File::open(path)?);
    if &read_exact::<8>(&mut r)? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = u16::from_le_bytes(read_exact(&mut r)?);
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let d = read_exact::<3>(&mut r)?;
    let found = d.map(|x| x as usize);
    if found != dims {
        return Err(Error::Cache(format!(
            "file holds format {found:?}, wanted {dims:?}"
        )));
    }
    let n = 1usize << format_bits(dims)?;
    let mut orbit_id = vec![0u8; n];
    let mut rank = vec![0u8; n];
    r.read_exact(&mut orbit_id[1..])
        .map_err(|e| Error::Cache(format!("truncated orbit table: {e}")))?;
    r.read_exact(&mut rank[1..])
        .map_err(|e| Error::Cache(format!("truncated rank table: {e}")))?;
    let count = u16::from_le_bytes(read_exact(&mut r)?) as usize;
    let mut orbits = Vec::with_capacity(count);
    for _ in 0..count {
        orbits.push(OrbitRecord {
            index: u16::from_le_bytes(read_exact(&mut r)?),
            canonical: u32::from_le_bytes(read_exact(&mut r)?),
            size: u32::from_le_bytes(read_exact(&mut r)?),
            rank: read_exact::<1>(&mut r)?[0],
            large_index: u16::from_le_bytes(read_exact(&mut r)?),
        });
    }
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Cache("trailing bytes".into()));
    }
    for (n, o) in orbits.iter().enumerate() {
        if o.index as usize != n + 1 || o.canonical as usize >= orbit_id.len() {
            return Err(Error::Cache(format!("corrupt orbit record {}", n + 1)));
        }
    }
    if orbit_id[1..].iter().any(|&w| w == 0 || w as usize > count) {
        return Err(Error::Cache("orbit table references unknown orbit".into()));
    }
    CensusTables::from_parts(dims, orbit_id, rank, orbits)
}
