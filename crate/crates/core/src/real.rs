//! Scalar abstraction for the numerical core.
//!
//! Everything in this crate is written against [`Real`] so the same code
//! runs at `f32` or `f64`. The tolerances quoted throughout the API
//! documentation assume `f64`; `f32` works but saturates earlier.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless embedding of an `f64` constant (coefficients, tolerances).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must embed into Real")
    }

    /// Lossless embedding of a small integer count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize must embed into Real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
