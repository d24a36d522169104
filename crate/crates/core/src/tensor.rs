//! Dense storage for small 3-way arrays, slices, outer products and the
//! rank-preserving group actions.
//!
//! Indices are 0-based in the API; error messages report them 1-based.
//! Entries are stored in lex order of the subscripts `(i, j, k)`, so the last
//! index varies fastest.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sizes `(p, q, r)` of the three directions.
pub type Dims = [usize; 3];

pub fn validate_dims(dims: Dims) -> Result<()> {
    if dims.iter().all(|d| (1..=3).contains(d)) {
        Ok(())
    } else {
        Err(Error::InvalidDims(dims))
    }
}

/// Lex position of `(i, j, k)` within a tensor of the given dims.
#[inline]
pub fn lex_index(dims: Dims, i: usize, j: usize, k: usize) -> usize {
    (i * dims[1] + j) * dims[2] + k
}

/// Inverse of [`lex_index`].
#[inline]
pub fn lex_subscripts(dims: Dims, n: usize) -> [usize; 3] {
    let k = n % dims[2];
    let j = (n / dims[2]) % dims[1];
    let i = n / (dims[1] * dims[2]);
    [i, j, k]
}

/// All six permutations of the three directions, identity first.
pub const DIRECTION_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn invert_permutation(perm: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (d, &src) in perm.iter().enumerate() {
        inv[src] = d;
    }
    inv
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor<S> {
    dims: Dims,
    data: Vec<S>,
}

impl<S: Scalar> DenseTensor<S> {
    pub fn new(dims: Dims, data: Vec<S>) -> Result<Self> {
        validate_dims(dims)?;
        let expected = dims.iter().product();
        if data.len() != expected {
            return Err(Error::EntryCount {
                expected,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos + 1));
        }
        Ok(DenseTensor { dims, data })
    }

    pub fn zeros(dims: Dims) -> Result<Self> {
        validate_dims(dims)?;
        Ok(DenseTensor {
            dims,
            data: vec![S::zero(); dims.iter().product()],
        })
    }

    /// Builds a tensor entry by entry; `f` receives 0-based subscripts.
    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> S) -> Result<Self> {
        validate_dims(dims)?;
        let data = (0..dims.iter().product())
            .map(|n| {
                let [i, j, k] = lex_subscripts(dims, n);
                f(i, j, k)
            })
            .collect();
        Self::new(dims, data)
    }

    /// Stacks frontal slices `X_1 | ... | X_r`, each `p x q`.
    pub fn from_frontal_slices(slices: &[DMatrix<S>]) -> Result<Self> {
        let r = slices.len();
        let (p, q) = slices.first().map(|m| m.shape()).unwrap_or((0, 0));
        let dims = [p, q, r];
        validate_dims(dims)?;
        for m in slices {
            if m.shape() != (p, q) {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    found: [m.nrows(), m.ncols(), r],
                });
            }
        }
        Self::from_fn(dims, |i, j, k| slices[k][(i, j)])
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Entries in lex order of subscripts.
    pub fn entries(&self) -> &[S] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        self.data[lex_index(self.dims, i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: S) {
        let n = lex_index(self.dims, i, j, k);
        self.data[n] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        DenseTensor {
            dims: self.dims,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                found: other.dims,
            });
        }
        Ok(DenseTensor {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// The 2-D slice obtained by fixing `index` along `direction` (both
    /// 0-based). The remaining two directions keep their order, so frontal
    /// slice `k` of a `p x q x r` tensor is `p x q`.
    pub fn slice(&self, direction: usize, index: usize) -> Result<DMatrix<S>> {
        if direction > 2 {
            return Err(Error::IndexOutOfRange {
                direction: direction + 1,
                index: index + 1,
                len: 3,
            });
        }
        if index >= self.dims[direction] {
            return Err(Error::IndexOutOfRange {
                direction: direction + 1,
                index: index + 1,
                len: self.dims[direction],
            });
        }
        let [p, q, r] = self.dims;
        Ok(match direction {
            0 => DMatrix::from_fn(q, r, |j, k| self.get(index, j, k)),
            1 => DMatrix::from_fn(p, r, |i, k| self.get(i, index, k)),
            _ => DMatrix::from_fn(p, q, |i, j| self.get(i, j, index)),
        })
    }

    pub fn frontal_slices(&self) -> Vec<DMatrix<S>> {
        (0..self.dims[2])
            .map(|k| self.slice(2, k).expect("index in range"))
            .collect()
    }

    /// The `p x qr` matrix form `[X_1 | ... | X_r]`.
    pub fn matrix_form(&self) -> DMatrix<S> {
        let [p, q, r] = self.dims;
        DMatrix::from_fn(p, q * r, |i, col| self.get(i, col % q, col / q))
    }

    /// Change of basis along one direction: the new entry with subscript `s`
    /// in `direction` is `sum_t m[s, t] * x[..t..]`.
    pub fn mode_product(&self, direction: usize, m: &DMatrix<S>) -> Result<Self> {
        let n = self.dims[direction];
        if m.ncols() != n {
            let mut found = self.dims;
            found[direction] = m.ncols();
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                found,
            });
        }
        let mut dims = self.dims;
        dims[direction] = m.nrows();
        validate_dims(dims)?;
        let mut out = DenseTensor::zeros(dims)?;
        for pos in 0..out.data.len() {
            let sub = lex_subscripts(dims, pos);
            let mut acc = S::zero();
            let mut src = sub;
            for t in 0..n {
                src[direction] = t;
                acc += m[(sub[direction], t)] * self.get(src[0], src[1], src[2]);
            }
            out.data[pos] = acc;
        }
        Ok(out)
    }

    /// Direction permutation: direction `d` of the result is direction
    /// `perm[d]` of `self`.
    pub fn permute_directions(&self, perm: [usize; 3]) -> Self {
        let dims = [
            self.dims[perm[0]],
            self.dims[perm[1]],
            self.dims[perm[2]],
        ];
        let mut data = Vec::with_capacity(self.data.len());
        for n in 0..self.data.len() {
            let new = lex_subscripts(dims, n);
            let mut old = [0; 3];
            for d in 0..3 {
                old[perm[d]] = new[d];
            }
            data.push(self.get(old[0], old[1], old[2]));
        }
        DenseTensor { dims, data }
    }

    /// Applies `g`: change of basis along each direction, then the optional
    /// direction permutation.
    pub fn act(&self, g: &GroupElement<S>) -> Result<Self> {
        let mut t = self.clone();
        for (d, m) in g.matrices.iter().enumerate() {
            if m.nrows() != m.ncols() {
                return Err(Error::SingularMatrix(d + 1));
            }
            t = t.mode_product(d, m)?;
        }
        Ok(match g.perm {
            Some(p) => t.permute_directions(p),
            None => t,
        })
    }
}

/// Inverse by Gauss-Jordan elimination with partial pivoting. Exact for
/// `F2`; for complex scalars any nonzero pivot is accepted.
pub fn try_inverse<S: Scalar>(m: &DMatrix<S>) -> Option<DMatrix<S>> {
    let n = m.nrows();
    if n != m.ncols() {
        return None;
    }
    let mut a = m.clone();
    let mut inv = DMatrix::<S>::identity(n, n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| {
            a[(x, col)]
                .magnitude()
                .partial_cmp(&a[(y, col)].magnitude())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        let scale = a[(pivot, col)].recip()?;
        a.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        for c in 0..n {
            a[(col, c)] *= scale;
            inv[(col, c)] *= scale;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[(row, col)];
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                a[(row, c)] = a[(row, c)] - factor * ac;
                inv[(row, c)] = inv[(row, c)] - factor * ic;
            }
        }
    }
    Some(inv)
}

/// A triple of invertible matrices, one per direction, optionally followed
/// by a permutation of the directions.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<S: Scalar> {
    matrices: [DMatrix<S>; 3],
    perm: Option<[usize; 3]>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(matrices: [DMatrix<S>; 3], perm: Option<[usize; 3]>) -> Result<Self> {
        for (d, m) in matrices.iter().enumerate() {
            if try_inverse(m).is_none() {
                return Err(Error::SingularMatrix(d + 1));
            }
        }
        if let Some(p) = perm {
            let mut seen = [false; 3];
            for &x in &p {
                if x > 2 || seen[x] {
                    return Err(Error::Precondition(format!("{p:?} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        Ok(GroupElement { matrices, perm })
    }

    pub fn identity(dims: Dims) -> Self {
        GroupElement {
            matrices: dims.map(|n| DMatrix::identity(n, n)),
            perm: None,
        }
    }

    pub fn matrices(&self) -> &[DMatrix<S>; 3] {
        &self.matrices
    }

    pub fn perm(&self) -> Option<[usize; 3]> {
        self.perm
    }

    /// The element undoing `self`.
    pub fn inverse(&self) -> Self {
        let inv = |m: &DMatrix<S>| try_inverse(m).expect("checked invertible at construction");
        match self.perm {
            None => GroupElement {
                matrices: [
                    inv(&self.matrices[0]),
                    inv(&self.matrices[1]),
                    inv(&self.matrices[2]),
                ],
                perm: None,
            },
            Some(p) => {
                // Undo the permutation with q = p^-1, then M_d^-1 on direction
                // d of the result, which is direction q[d] before permuting.
                let q = invert_permutation(p);
                let mut mats = self.matrices.clone();
                for d in 0..3 {
                    mats[q[d]] = inv(&self.matrices[d]);
                }
                GroupElement {
                    matrices: mats,
                    perm: Some(q),
                }
            }
        }
    }
}

/// An outer product `a (x) b (x) c` of nonzero vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleTerm<S: Scalar> {
    pub a: DVector<S>,
    pub b: DVector<S>,
    pub c: DVector<S>,
}

impl<S: Scalar> SimpleTerm<S> {
    pub fn new(a: DVector<S>, b: DVector<S>, c: DVector<S>) -> Result<Self> {
        for (d, v) in [&a, &b, &c].into_iter().enumerate() {
            if v.is_empty() || v.len() > 3 {
                return Err(Error::InvalidDims([a.len(), b.len(), c.len()]));
            }
            if v.iter().all(|x| x.is_zero()) {
                return Err(Error::ZeroVector(d + 1));
            }
        }
        Ok(SimpleTerm { a, b, c })
    }

    pub fn from_slices(a: &[S], b: &[S], c: &[S]) -> Result<Self> {
        Self::new(
            DVector::from_column_slice(a),
            DVector::from_column_slice(b),
            DVector::from_column_slice(c),
        )
    }

    pub fn dims(&self) -> Dims {
        [self.a.len(), self.b.len(), self.c.len()]
    }

    pub fn vector(&self, direction: usize) -> &DVector<S> {
        match direction {
            0 => &self.a,
            1 => &self.b,
            _ => &self.c,
        }
    }

    pub fn to_tensor(&self) -> DenseTensor<S> {
        outer_product(self.a.as_slice(), self.b.as_slice(), self.c.as_slice())
            .expect("term vectors have valid lengths")
    }
}

/// The tensor whose `(i, j, k)` entry is `a_i b_j c_k`.
pub fn outer_product<S: Scalar>(a: &[S], b: &[S], c: &[S]) -> Result<DenseTensor<S>> {
    let dims = [a.len(), b.len(), c.len()];
    DenseTensor::from_fn(dims, |i, j, k| a[i] * b[j] * c[k])
}

/// A sum of simple tensors with the residual it leaves against its target.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<S: Scalar> {
    pub terms: Vec<SimpleTerm<S>>,
    pub target_dims: Dims,
    pub residual: f64,
}

impl<S: Scalar> Decomposition<S> {
    pub fn empty(target_dims: Dims) -> Self {
        Decomposition {
            terms: Vec::new(),
            target_dims,
            residual: 0.0,
        }
    }

    pub fn new(target_dims: Dims, terms: Vec<SimpleTerm<S>>) -> Result<Self> {
        for t in &terms {
            if t.dims() != target_dims {
                return Err(Error::DimensionMismatch {
                    expected: target_dims,
                    found: t.dims(),
                });
            }
        }
        Ok(Decomposition {
            terms,
            target_dims,
            residual: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Entrywise sum of the outer products.
    pub fn evaluate(&self) -> Result<DenseTensor<S>> {
        let mut sum = DenseTensor::zeros(self.target_dims)?;
        for term in &self.terms {
            if term.dims() != self.target_dims {
                return Err(Error::DimensionMismatch {
                    expected: self.target_dims,
                    found: term.dims(),
                });
            }
            sum = sum.add(&term.to_tensor())?;
        }
        Ok(sum)
    }
}

/// Unit vector `e_index` of length `n`.
pub fn unit<S: Scalar>(n: usize, index: usize) -> DVector<S> {
    let mut v = DVector::from_element(n, S::zero());
    v[index] = S::one();
    v
}

/// Permutation matrix swapping two basis vectors.
pub fn swap_matrix<S: Scalar>(n: usize, x: usize, y: usize) -> DMatrix<S> {
    let mut m = DMatrix::<S>::identity(n, n);
    m[(x, x)] = S::zero();
    m[(y, y)] = S::zero();
    m[(x, y)] = S::one();
    m[(y, x)] = S::one();
    m
}
