//! Scalar abstraction: the numeric core is generic over the floating-point
//! type; `f64` is the working precision of the CLI and the experiment engine.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar (`f32` or `f64`).
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumCast
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Display
    + Debug
    + LowerExp
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance for the adaptive quadrature backing the
    /// distribution analytics.
    fn quad_tol() -> Self;

    /// Default bisection accuracy for psi-norm searches.
    fn psi_tol() -> Self;
}

impl Scalar for f64 {
    fn quad_tol() -> Self {
        1e-12
    }
    fn psi_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn quad_tol() -> Self {
        1e-6
    }
    fn psi_tol() -> Self {
        1e-5
    }
}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn cast<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("f64 does not convert to scalar")
}

/// Convert a `usize` (dimension, count) into the working scalar type.
#[inline]
pub fn cast_usize<F: Scalar>(x: usize) -> F {
    F::from_usize(x).expect("usize does not convert to scalar")
}
