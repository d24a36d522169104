//! Integer codes for tensors over the two-element field.
//!
//! Entry `x_ijk` with lex position `n` occupies bit `N - 1 - n`, where `N` is
//! the number of entries, so `x_111` is the most significant bit.

use crate::error::{Error, Result};
use crate::scalar::F2;
use crate::tensor::{lex_index, validate_dims, DenseTensor, Dims};

/// Largest entry count a code can hold.
pub const MAX_BITS: usize = 27;

/// Bit position of the entry at lex position `n`.
#[inline]
pub fn bit_of(dims: Dims, n: usize) -> u32 {
    (dims.iter().product::<usize>() - 1 - n) as u32
}

/// Bit position of the entry with 0-based subscripts `(i, j, k)`.
#[inline]
pub fn bit_of_entry(dims: Dims, i: usize, j: usize, k: usize) -> u32 {
    bit_of(dims, lex_index(dims, i, j, k))
}

pub fn encode(t: &DenseTensor<F2>) -> u32 {
    let n = t.len();
    t.entries()
        .iter()
        .enumerate()
        .fold(0u32, |acc, (pos, x)| acc | (x.bit() << (n - 1 - pos)))
}

pub fn decode(dims: Dims, code: u64) -> Result<DenseTensor<F2>> {
    validate_dims(dims)?;
    let n: usize = dims.iter().product();
    if code >> n != 0 {
        return Err(Error::CodeOutOfRange { code, dims });
    }
    let data = (0..n).map(|pos| F2(code >> (n - 1 - pos) & 1 == 1)).collect();
    DenseTensor::new(dims, data)
}

/// `0` followed by `1`..`N` rendered as `.`/`1`, in lex order.
pub fn dots_pattern(dims: Dims, code: u32) -> String {
    let n: usize = dims.iter().product();
    (0..n)
        .map(|pos| if code >> (n - 1 - pos) & 1 == 1 { '1' } else { '.' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: Dims = [3, 3, 3];

    #[test]
    fn corner_entries() {
        let mut t = DenseTensor::<F2>::zeros(D).unwrap();
        t.set(2, 2, 2, F2::ONE);
        assert_eq!(encode(&t), 1);
        let mut t = DenseTensor::<F2>::zeros(D).unwrap();
        t.set(0, 0, 0, F2::ONE);
        assert_eq!(encode(&t), 1 << 26);
    }

    #[test]
    fn round_trip_samples() {
        for code in [0u64, 1, 2, 0x5555, (1 << 27) - 1, 0x2ab_cdef] {
            assert_eq!(encode(&decode(D, code).unwrap()) as u64, code);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            decode([2, 2, 2], 256),
            Err(Error::CodeOutOfRange { code: 256, .. })
        ));
    }

    #[test]
    fn pattern_matches_entries() {
        assert_eq!(dots_pattern([2, 2, 2], 0b1000_0001), "1......1");
        assert_eq!(bit_of_entry([2, 2, 2], 1, 1, 1), 0);
    }
}
