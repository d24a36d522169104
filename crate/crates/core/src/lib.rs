//! Tensor rank over the two-element field and over the complex numbers for
//! tensors of format at most `3 x 3 x 3`.
//!
//! * [`tensor`] holds dense storage, outer products and the group actions.
//! * [`f2`] classifies every tensor of a small format into orbits with their
//!   ranks by exhaustive search.
//! * [`complex`] builds explicit minimal-length decompositions of complex
//!   tensors.
//! * [`text`] reads and writes the plain-text tensor and decomposition
//!   formats used by the `tensorlab` binary.
//! * [`cli`] is that binary, callable in-process.

pub mod cli;
pub mod code;
pub mod complex;
pub mod error;
pub mod f2;
pub mod scalar;
pub mod tensor;
pub mod text;

pub use error::{Error, Result};
pub use scalar::{Scalar, F2};
pub use tensor::{outer_product, Decomposition, DenseTensor, Dims, GroupElement, SimpleTerm};
