//! `GL_n(F2)` for `n <= 3` as bit matrices, and the induced linear action on
//! tensor codes.

use std::collections::{HashSet, VecDeque};

use nalgebra::DMatrix;

use crate::code;
use crate::error::Result;
use crate::scalar::F2;
use crate::tensor::{DenseTensor, Dims, GroupElement};

/// An `n x n` matrix over F2 with `n <= 3`; bit `j` of `rows[i]` is entry
/// `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    n: u8,
    rows: [u8; 3],
}

impl BitMatrix {
    pub fn identity(n: usize) -> Self {
        let mut rows = [0; 3];
        for (i, r) in rows.iter_mut().enumerate().take(n) {
            *r = 1 << i;
        }
        BitMatrix { n: n as u8, rows }
    }

    /// From row-major 0/1 entries.
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let n = rows.len();
        assert!(n <= 3 && rows.iter().all(|r| r.len() == n));
        let mut out = [0u8; 3];
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                out[i] |= (x & 1) << j;
            }
        }
        BitMatrix { n: n as u8, rows: out }
    }

    /// Cyclic permutation `e1 -> e2 -> ... -> en -> e1`.
    pub fn cycle(n: usize) -> Self {
        let mut rows = [0u8; 3];
        for j in 0..n {
            rows[(j + 1) % n] |= 1 << j;
        }
        BitMatrix { n: n as u8, rows }
    }

    /// Elementary operation `e1 -> e1 + e2` (identity when `n = 1`).
    pub fn transvection(n: usize) -> Self {
        let mut m = Self::identity(n);
        if n >= 2 {
            m.rows[1] |= 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    #[inline]
    pub fn row(&self, i: usize) -> u8 {
        self.rows[i]
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let mut rows = [0u8; 3];
        for (i, r) in rows.iter_mut().enumerate().take(self.size()) {
            for j in 0..self.size() {
                if self.get(i, j) {
                    *r ^= other.rows[j];
                }
            }
        }
        BitMatrix { n: self.n, rows }
    }

    /// Determinant over F2.
    pub fn det(&self) -> bool {
        let n = self.size();
        let mut rows = self.rows;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| rows[r] >> col & 1 == 1) else {
                return false;
            };
            rows.swap(col, p);
            for r in col + 1..n {
                if rows[r] >> col & 1 == 1 {
                    rows[r] ^= rows[col];
                }
            }
        }
        true
    }

    pub fn to_dmatrix(&self) -> DMatrix<F2> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| F2(self.get(i, j)))
    }
}

/// All elements of `GL_n(F2)`, obtained as the closure of the cycle and the
/// transvection. Sorted, identity included.
pub fn gl_elements(n: usize) -> Vec<BitMatrix> {
    let gens = [BitMatrix::cycle(n), BitMatrix::transvection(n)];
    let id = BitMatrix::identity(n);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let x = g.mul(&m);
            if seen.insert(x) {
                queue.push_back(x);
            }
        }
    }
    let mut all: Vec<_> = seen.into_iter().collect();
    all.sort();
    all
}

/// The 168 elements of `GL_3(F2)`.
pub fn gl3_f2_elements() -> Vec<BitMatrix> {
    gl_elements(3)
}

/// A triple of invertible bit matrices acting on the three directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitGroupElement {
    pub mats: [BitMatrix; 3],
}

impl BitGroupElement {
    pub fn identity(dims: Dims) -> Self {
        BitGroupElement {
            mats: dims.map(BitMatrix::identity),
        }
    }

    pub fn to_group_element(&self) -> GroupElement<F2> {
        GroupElement::new(self.mats.map(|m| m.to_dmatrix()), None)
            .expect("bit matrices of a group element are invertible")
    }

    /// Acts on a dense tensor through the generic path.
    pub fn act_dense(&self, t: &DenseTensor<F2>) -> Result<DenseTensor<F2>> {
        t.act(&self.to_group_element())
    }
}

/// Generators of `GL_p x GL_q x GL_r`: each generator of one factor placed
/// in its direction, identities elsewhere. Trivial generators are dropped.
pub fn product_generators(dims: Dims) -> Vec<BitGroupElement> {
    let mut out = Vec::new();
    for d in 0..3 {
        for m in [BitMatrix::cycle(dims[d]), BitMatrix::transvection(dims[d])] {
            if m == BitMatrix::identity(dims[d]) {
                continue;
            }
            let mut g = BitGroupElement::identity(dims);
            g.mats[d] = m;
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Precomputed action of one [`BitGroupElement`] on integer codes.
///
/// A code splits into `p` horizontal slices of `q r` bits each, slice 0 in
/// the most significant position. Directions 2 and 3 act inside each slice
/// through a lookup table; direction 1 XOR-combines slices.
#[derive(Clone, Debug)]
pub struct CodeAction {
    p: usize,
    slice_bits: usize,
    a_rows: [u8; 3],
    table: Option<Vec<u32>>,
}

impl CodeAction {
    pub fn new(dims: Dims, g: &BitGroupElement) -> Self {
        let [p, q, r] = dims;
        let slice_bits = q * r;
        let [a, b, c] = g.mats;
        let table = if b == BitMatrix::identity(q) && c == BitMatrix::identity(r) {
            None
        } else {
            Some(
                (0..1u32 << slice_bits)
                    .map(|s| slice_transform(q, r, &b, &c, s))
                    .collect(),
            )
        };
        CodeAction {
            p,
            slice_bits,
            a_rows: [a.row(0), a.row(1), a.row(2)],
            table,
        }
    }

    #[inline]
    pub fn apply(&self, code: u32) -> u32 {
        let mask = (1u32 << self.slice_bits) - 1;
        let mut s = [0u32; 3];
        for (i, si) in s.iter_mut().enumerate().take(self.p) {
            let v = (code >> ((self.p - 1 - i) * self.slice_bits)) & mask;
            *si = match &self.table {
                Some(t) => t[v as usize],
                None => v,
            };
        }
        let mut out = 0;
        for i1 in 0..self.p {
            let row = self.a_rows[i1];
            let mut v = 0;
            for (i, si) in s.iter().enumerate().take(self.p) {
                if row >> i & 1 == 1 {
                    v ^= si;
                }
            }
            out |= v << ((self.p - 1 - i1) * self.slice_bits);
        }
        out
    }
}

/// `B S C^t` for the `q x r` slice encoded in `s` (bit `q r - 1 - (j r + k)`
/// holds entry `(j, k)`).
fn slice_transform(q: usize, r: usize, b: &BitMatrix, c: &BitMatrix, s: u32) -> u32 {
    let n = q * r;
    let entry = |j: usize, k: usize| s >> (n - 1 - (j * r + k)) & 1 == 1;
    let mut out = 0;
    for j1 in 0..q {
        for k1 in 0..r {
            let mut v = false;
            for j in 0..q {
                if !b.get(j1, j) {
                    continue;
                }
                for k in 0..r {
                    if c.get(k1, k) && entry(j, k) {
                        v = !v;
                    }
                }
            }
            if v {
                out |= 1 << (n - 1 - (j1 * r + k1));
            }
        }
    }
    out
}

/// Applies a direction permutation to a code: direction `d` of the result
/// is direction `perm[d]` of the input.
pub fn permute_code(dims: Dims, perm: [usize; 3], code: u32) -> Result<u32> {
    let t = code::decode(dims, code as u64)?;
    Ok(code::encode(&t.permute_directions(perm)))
}

/// The orbit of `x` under the group generated by `gens`, by the spinning
/// worklist: `O` accumulates the orbit, `L` holds the newest elements and
/// `N` collects images of `L` not yet in `O`. Returned sorted.
pub fn spin_orbit(dims: Dims, x: u32, gens: &[BitGroupElement]) -> Vec<u32> {
    let actions: Vec<_> = gens.iter().map(|g| CodeAction::new(dims, g)).collect();
    let mut orbit = HashSet::from([x]);
    let mut last = vec![x];
    while !last.is_empty() {
        let mut new = Vec::new();
        for &y in &last {
            for a in &actions {
                let z = a.apply(y);
                if orbit.insert(z) {
                    new.push(z);
                }
            }
        }
        last = new;
    }
    let mut out: Vec<_> = orbit.into_iter().collect();
    out.sort_unstable();
    out
}
