//! Exhaustive orbit and rank classification of every tensor of a format.
//!
//! The tables are indexed directly by code. Slot 0 (the zero tensor) is kept
//! so that indexing needs no offset; it always holds orbit 0 and rank 0.

use std::thread;

use crate::code;
use crate::error::{Error, Result};
use crate::scalar::F2;
use crate::tensor::{outer_product, validate_dims, Dims, DIRECTION_PERMUTATIONS};

use super::group::{permute_code, product_generators, CodeAction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    /// Small-orbit index, 1-based in order of discovery.
    pub index: u16,
    /// Minimum code in the orbit.
    pub canonical: u32,
    pub size: u32,
    pub rank: u8,
    /// Large orbit containing this one, 1-based in table order.
    pub large_index: u16,
}

/// A union of small orbits closed under the direction permutations that
/// preserve the format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeOrbit {
    pub index: u16,
    pub canonical: u32,
    pub size: u64,
    pub rank: u8,
    /// Small-orbit indices, ascending.
    pub members: Vec<u16>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    /// Skip the link array and re-spin orbits while stamping ranks.
    pub low_memory: bool,
    /// Worker threads for the rank sweeps; results do not depend on it.
    pub threads: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            low_memory: false,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusTables {
    dims: Dims,
    orbit_id: Vec<u8>,
    link: Option<Vec<u32>>,
    rank: Vec<u8>,
    orbits: Vec<OrbitRecord>,
    large: Vec<LargeOrbit>,
}

/// Number of entries, checked against the code width.
pub fn format_bits(dims: Dims) -> Result<usize> {
    validate_dims(dims)?;
    let bits: usize = dims.iter().product();
    if bits > code::MAX_BITS {
        return Err(Error::FormatTooLarge {
            dims,
            bits,
            max: code::MAX_BITS,
        });
    }
    Ok(bits)
}

fn alloc<T: Clone>(len: usize, value: T) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| Error::Alloc {
        bytes: len * std::mem::size_of::<T>(),
    })?;
    v.resize(len, value);
    Ok(v)
}

impl CensusTables {
    /// Runs the full pipeline: orbits, links, ranks, large orbits.
    pub fn compute(dims: Dims, options: CensusOptions) -> Result<Self> {
        let mut t = classify_all(dims)?;
        if options.low_memory {
            compute_ranks_respin(&mut t, options.threads);
        } else {
            t.link = Some(build_link_array(&t)?);
            compute_ranks(&mut t, options.threads);
        }
        merge_large_orbits(&mut t)?;
        Ok(t)
    }

    /// Reassembles tables read from storage; large orbits are rebuilt from
    /// the records.
    pub(crate) fn from_parts(
        dims: Dims,
        orbit_id: Vec<u8>,
        rank: Vec<u8>,
        orbits: Vec<OrbitRecord>,
    ) -> Result<Self> {
        let mut large: Vec<LargeOrbit> = Vec::new();
        for rec in &orbits {
            let li = rec.large_index as usize;
            if li == 0 {
                return Err(Error::Cache(format!("orbit {} has no large orbit", rec.index)));
            }
            if large.len() < li {
                large.resize_with(li, || LargeOrbit {
                    index: 0,
                    canonical: u32::MAX,
                    size: 0,
                    rank: 0,
                    members: Vec::new(),
                });
            }
            let l = &mut large[li - 1];
            l.index = li as u16;
            l.canonical = l.canonical.min(rec.canonical);
            l.size += rec.size as u64;
            l.rank = rec.rank;
            l.members.push(rec.index);
        }
        if large.iter().any(|l| l.members.is_empty()) {
            return Err(Error::Cache("large orbit indices are not contiguous".into()));
        }
        Ok(CensusTables {
            dims,
            orbit_id,
            link: None,
            rank,
            orbits,
            large,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Number of codes including zero, `2^(pqr)`.
    pub fn code_count(&self) -> usize {
        self.orbit_id.len()
    }

    /// Per-code small-orbit index; slot 0 is the zero tensor.
    pub fn orbit_ids(&self) -> &[u8] {
        &self.orbit_id
    }

    /// Per-code rank; slot 0 is the zero tensor.
    pub fn ranks(&self) -> &[u8] {
        &self.rank
    }

    /// Next code in the same orbit, if the link array was kept.
    pub fn link(&self) -> Option<&[u32]> {
        self.link.as_deref()
    }

    pub fn orbits(&self) -> &[OrbitRecord] {
        &self.orbits
    }

    pub fn large_orbits(&self) -> &[LargeOrbit] {
        &self.large
    }

    fn check(&self, code: u32) -> Result<()> {
        if (code as usize) < self.code_count() {
            Ok(())
        } else {
            Err(Error::CodeOutOfRange {
                code: code as u64,
                dims: self.dims,
            })
        }
    }

    pub fn rank_of(&self, code: u32) -> Result<u8> {
        self.check(code)?;
        Ok(self.rank[code as usize])
    }

    /// The small orbit of a nonzero code; `None` for zero.
    pub fn orbit_of(&self, code: u32) -> Result<Option<&OrbitRecord>> {
        self.check(code)?;
        Ok(match self.orbit_id[code as usize] {
            0 => None,
            w => Some(&self.orbits[w as usize - 1]),
        })
    }

    pub fn large_orbit_of(&self, code: u32) -> Result<Option<&LargeOrbit>> {
        Ok(self
            .orbit_of(code)?
            .map(|o| &self.large[o.large_index as usize - 1]))
    }

    pub fn max_rank(&self) -> u8 {
        self.orbits.iter().map(|o| o.rank).max().unwrap_or(0)
    }

    /// Per-rank statistics from rank 0 (the zero tensor) to the maximum.
    pub fn rank_summary(&self) -> Vec<RankSummary> {
        let top = self.max_rank() as usize;
        let mut rows: Vec<RankSummary> = (0..=top)
            .map(|r| RankSummary {
                rank: r as u8,
                small: 0,
                large: 0,
                tensors: 0,
            })
            .collect();
        rows[0] = RankSummary {
            rank: 0,
            small: 1,
            large: 1,
            tensors: 1,
        };
        for o in &self.orbits {
            rows[o.rank as usize].small += 1;
            rows[o.rank as usize].tensors += o.size as u64;
        }
        for l in &self.large {
            rows[l.rank as usize].large += 1;
        }
        rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankSummary {
    pub rank: u8,
    pub small: usize,
    pub large: usize,
    pub tensors: u64,
}

fn spin_mark(start: u32, omega: u8, actions: &[CodeAction], marks: &mut [u8]) -> u32 {
    marks[start as usize] = omega;
    let mut size = 1u32;
    let mut last = vec![start];
    let mut new = Vec::new();
    while !last.is_empty() {
        for &y in &last {
            for a in actions {
                let z = a.apply(y);
                if marks[z as usize] == 0 {
                    marks[z as usize] = omega;
                    new.push(z);
                }
            }
        }
        size += new.len() as u32;
        std::mem::swap(&mut last, &mut new);
        new.clear();
    }
    size
}

/// Ascending scan: every code without an orbit starts a new orbit, spun to
/// completion. The triggering code is the orbit minimum.
pub fn classify_all(dims: Dims) -> Result<CensusTables> {
    let bits = format_bits(dims)?;
    let n = 1usize << bits;
    let actions: Vec<_> = product_generators(dims)
        .iter()
        .map(|g| CodeAction::new(dims, g))
        .collect();
    let mut orbit_id = alloc(n, 0u8)?;
    let rank = alloc(n, 0u8)?;
    let mut orbits = Vec::new();
    for x in 1..n as u32 {
        if orbit_id[x as usize] != 0 {
            continue;
        }
        let omega = orbits.len() + 1;
        if omega > u8::MAX as usize {
            return Err(Error::TooManyOrbits(omega));
        }
        let size = spin_mark(x, omega as u8, &actions, &mut orbit_id);
        orbits.push(OrbitRecord {
            index: omega as u16,
            canonical: x,
            size,
            rank: 0,
            large_index: 0,
        });
    }
    Ok(CensusTables {
        dims,
        orbit_id,
        link: None,
        rank,
        orbits,
        large: Vec::new(),
    })
}

/// `link[i]` is the next larger code in the orbit of `i`, wrapping from the
/// orbit maximum to its canonical code. `link[0] = 0`.
pub fn build_link_array(t: &CensusTables) -> Result<Vec<u32>> {
    let n = t.code_count();
    let mut link = alloc(n, 0u32)?;
    let mut last = vec![0u32; t.orbits.len() + 1];
    for x in 1..n as u32 {
        let w = t.orbit_id[x as usize] as usize;
        if last[w] != 0 {
            link[last[w] as usize] = x;
        }
        last[w] = x;
    }
    for o in &t.orbits {
        link[last[o.index as usize] as usize] = o.canonical;
    }
    Ok(link)
}

/// Codes of all simple tensors of the format.
pub fn simple_tensor_codes(dims: Dims) -> Vec<u32> {
    let vectors = |n: usize| -> Vec<Vec<F2>> {
        (1u32..1 << n)
            .map(|m| (0..n).map(|i| F2(m >> (n - 1 - i) & 1 == 1)).collect())
            .collect()
    };
    let (va, vb, vc) = (vectors(dims[0]), vectors(dims[1]), vectors(dims[2]));
    let mut codes = Vec::with_capacity(va.len() * vb.len() * vc.len());
    for a in &va {
        for b in &vb {
            for c in &vc {
                let t = outer_product(a, b, c).expect("valid dims");
                codes.push(code::encode(&t));
            }
        }
    }
    codes.sort_unstable();
    codes.dedup();
    codes
}

/// Small orbits whose rank becomes `level + 1`: the orbits of `x ^ 1` for
/// codes `x` of rank `level` where `x ^ 1` is still unranked. The result
/// is a set, so the chunked parallel scan matches the sequential one.
fn next_level_orbits(t: &CensusTables, level: u8, threads: usize) -> Vec<u8> {
    let n = t.code_count();
    let scan = |lo: usize, hi: usize| {
        let mut hit = [false; 256];
        for x in lo..hi {
            if t.rank[x] != level {
                continue;
            }
            let y = x ^ 1;
            if y != 0 && t.rank[y] == 0 {
                hit[t.orbit_id[y] as usize] = true;
            }
        }
        hit
    };
    let threads = threads.max(1);
    let hits: Vec<[bool; 256]> = if threads == 1 {
        vec![scan(0, n)]
    } else {
        let chunk = n.div_ceil(threads);
        thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|i| {
                    let (lo, hi) = (i * chunk, ((i + 1) * chunk).min(n));
                    s.spawn(move || scan(lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan thread")).collect()
        })
    };
    (1..=255u8)
        .filter(|&w| hits.iter().any(|h| h[w as usize]))
        .collect()
}

fn stamp_via_link(t: &mut CensusTables, omega: u8, value: u8) {
    let start = t.orbits[omega as usize - 1].canonical;
    let link = t.link.as_ref().expect("link array built");
    let mut x = start;
    loop {
        t.rank[x as usize] = value;
        x = link[x as usize];
        if x == start {
            break;
        }
    }
}

fn seed_rank_one(t: &mut CensusTables) {
    for c in simple_tensor_codes(t.dims) {
        t.rank[c as usize] = 1;
    }
}

/// Breadth-first rank propagation. A tensor of rank `r + 1` is a rank-`r`
/// tensor plus a simple tensor, and the group moves that simple tensor to
/// the one with code 1, so flipping the last bit reaches every next orbit.
pub fn compute_ranks(t: &mut CensusTables, threads: usize) {
    seed_rank_one(t);
    let mut level = 1u8;
    loop {
        let next = next_level_orbits(t, level, threads);
        if next.is_empty() {
            break;
        }
        for w in next {
            stamp_via_link(t, w, level + 1);
        }
        level += 1;
    }
    fill_orbit_ranks(t);
}

/// As [`compute_ranks`] without a link array: each newly ranked orbit is
/// re-spun, with `rank == 0` marking unvisited codes.
pub fn compute_ranks_respin(t: &mut CensusTables, threads: usize) {
    let actions: Vec<_> = product_generators(t.dims)
        .iter()
        .map(|g| CodeAction::new(t.dims, g))
        .collect();
    seed_rank_one(t);
    let mut level = 1u8;
    loop {
        let next = next_level_orbits(t, level, threads);
        if next.is_empty() {
            break;
        }
        for w in next {
            let start = t.orbits[w as usize - 1].canonical;
            spin_stamp(start, level + 1, &actions, &mut t.rank);
        }
        level += 1;
    }
    fill_orbit_ranks(t);
}

fn spin_stamp(start: u32, value: u8, actions: &[CodeAction], rank: &mut [u8]) {
    rank[start as usize] = value;
    let mut last = vec![start];
    while !last.is_empty() {
        let mut new = Vec::new();
        for &y in &last {
            for a in actions {
                let z = a.apply(y);
                if rank[z as usize] == 0 {
                    rank[z as usize] = value;
                    new.push(z);
                }
            }
        }
        last = new;
    }
}

fn fill_orbit_ranks(t: &mut CensusTables) {
    for o in &mut t.orbits {
        o.rank = t.rank[o.canonical as usize];
    }
}

/// Unions small orbits related by a format-preserving direction permutation
/// and numbers the resulting large orbits by `(rank, size, canonical)`.
pub fn merge_large_orbits(t: &mut CensusTables) -> Result<()> {
    let k = t.orbits.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let dims = t.dims;
    let perms: Vec<_> = DIRECTION_PERMUTATIONS
        .iter()
        .copied()
        .filter(|p| (0..3).all(|d| dims[p[d]] == dims[d]))
        .collect();
    for i in 0..k {
        let x = t.orbits[i].canonical;
        for &p in &perms {
            let y = permute_code(dims, p, x)?;
            let j = t.orbit_id[y as usize] as usize - 1;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut large: Vec<LargeOrbit> = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|g| LargeOrbit {
            index: 0,
            canonical: g.iter().map(|&i| t.orbits[i].canonical).min().expect("nonempty"),
            size: g.iter().map(|&i| t.orbits[i].size as u64).sum(),
            rank: t.orbits[g[0]].rank,
            members: g.iter().map(|&i| t.orbits[i].index).collect(),
        })
        .collect();
    large.sort_by_key(|l| (l.rank, l.size, l.canonical));
    for (n, l) in large.iter_mut().enumerate() {
        l.index = n as u16 + 1;
        for &m in &l.members {
            t.orbits[m as usize - 1].large_index = l.index;
        }
    }
    t.large = large;
    Ok(())
}
