//! Scalar abstractions.
//!
//! [`Real`] is the floating-point scalar every numerical routine is generic
//! over. [`Ring`] is the weaker structure the sl(2) generator matrices need,
//! so they can be built over exact rationals as well as floats.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::{BigRational, Rational64};
use num_traits::{Float, FromPrimitive, Num};

/// Floating point scalar: `f32`, `f64` or [`DoubleDouble`](crate::dd::DoubleDouble).
///
/// The tolerance hooks carry the zero-test thresholds used throughout the
/// crate; they are tuned to the precision of each type.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    /// Converts a count or index.
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("index representable")
    }

    /// Relative threshold for the quantization test `|a + 2n√(−α)| ≤ tol·(1 + |a|)`.
    fn quantization_tol() -> Self;

    /// Relative threshold for determinant and recursion-tail zero tests.
    fn zero_tol() -> Self;
}

impl Real for f64 {
    fn quantization_tol() -> Self {
        1e-10
    }
    fn zero_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn quantization_tol() -> Self {
        1e-4
    }
    fn zero_tol() -> Self {
        1e-3
    }
}

/// Commutative ring with integer embedding, enough for polynomial-basis
/// operator matrices.
pub trait Ring: Num + Clone + Neg<Output = Self> + Debug {
    fn from_i64(v: i64) -> Self;
}

macro_rules! impl_ring_float {
    ($t:ty) => {
        impl Ring for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }
    };
}

impl_ring_float!(f32);
impl_ring_float!(f64);

impl Ring for Rational64 {
    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }
}

impl Ring for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}
