//! Scalar fields used for tensor entries: double-precision complex numbers and
//! the two-element field.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// A field usable as a tensor entry type.
pub trait Scalar:
    nalgebra::Scalar
    + Copy
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
    + Send
    + Sync
{
    /// Multiplicative inverse, `None` for zero.
    fn recip(self) -> Option<Self>;

    /// Magnitude used for pivot selection and norms.
    fn magnitude(self) -> f64;

    fn is_finite(self) -> bool {
        true
    }
}

impl Scalar for Complex64 {
    fn recip(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn magnitude(self) -> f64 {
        self.norm()
    }

    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// An element of the field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F2(pub bool);

impl F2 {
    pub const ZERO: F2 = F2(false);
    pub const ONE: F2 = F2(true);

    pub fn bit(self) -> u32 {
        self.0 as u32
    }
}

impl fmt::Debug for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl From<bool> for F2 {
    fn from(b: bool) -> Self {
        F2(b)
    }
}

// Field operations of F2: addition is xor, multiplication is and.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for F2 {
    type Output = F2;
    fn add(self, rhs: F2) -> F2 {
        F2(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for F2 {
    type Output = F2;
    fn sub(self, rhs: F2) -> F2 {
        F2(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for F2 {
    type Output = F2;
    fn mul(self, rhs: F2) -> F2 {
        F2(self.0 & rhs.0)
    }
}

impl Neg for F2 {
    type Output = F2;
    fn neg(self) -> F2 {
        self
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for F2 {
    fn add_assign(&mut self, rhs: F2) {
        self.0 ^= rhs.0;
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl MulAssign for F2 {
    fn mul_assign(&mut self, rhs: F2) {
        self.0 &= rhs.0;
    }
}

impl Zero for F2 {
    fn zero() -> Self {
        F2::ZERO
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for F2 {
    fn one() -> Self {
        F2::ONE
    }
}

impl Scalar for F2 {
    fn recip(self) -> Option<Self> {
        self.0.then_some(F2::ONE)
    }

    fn magnitude(self) -> f64 {
        self.0 as u8 as f64
    }
}
