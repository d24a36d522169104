//! Brute-force rank over F2 for formats with at most 12 entries, by
//! breadth-first search over sums of simple tensors.
//!
//! Simple tensors are built with the generic outer product so the oracle
//! shares no bit manipulation with the census.

use std::collections::VecDeque;

use crate::code;
use crate::error::{Error, Result};
use crate::scalar::F2;
use crate::tensor::{outer_product, validate_dims, Dims};

/// Largest entry count accepted by the oracle.
pub const ORACLE_MAX_BITS: usize = 12;

fn nonzero_vectors(n: usize) -> Vec<Vec<F2>> {
    (1u32..1 << n)
        .map(|m| (0..n).map(|i| F2(m & (1 << i) != 0)).collect())
        .collect()
}

/// Rank of every code of the format; index 0 is the zero tensor.
pub fn oracle_ranks(dims: Dims) -> Result<Vec<u8>> {
    validate_dims(dims)?;
    let bits: usize = dims.iter().product();
    if bits > ORACLE_MAX_BITS {
        return Err(Error::FormatTooLarge {
            dims,
            bits,
            max: ORACLE_MAX_BITS,
        });
    }
    let mut simple = Vec::new();
    for a in nonzero_vectors(dims[0]) {
        for b in nonzero_vectors(dims[1]) {
            for c in nonzero_vectors(dims[2]) {
                simple.push(code::encode(&outer_product(&a, &b, &c)?));
            }
        }
    }
    const UNSEEN: u8 = u8::MAX;
    let mut dist = vec![UNSEEN; 1 << bits];
    dist[0] = 0;
    let mut queue = VecDeque::from([0u32]);
    while let Some(x) = queue.pop_front() {
        for &s in &simple {
            let y = x ^ s;
            if dist[y as usize] == UNSEEN {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    Ok(dist)
}

/// Rank of a single code.
pub fn oracle_rank(dims: Dims, code: u64) -> Result<u8> {
    let ranks = oracle_ranks(dims)?;
    ranks
        .get(code as usize)
        .copied()
        .ok_or(Error::CodeOutOfRange { code, dims })
}
