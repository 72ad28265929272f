//! Scalar abstraction used throughout the crate.
//!
//! All numerics are written against [`Real`], a thin extension of
//! [`num_traits::Float`], so the same code instantiates at `f32` and `f64`.
//! Concrete aliases for the common `f64` instantiation live at the crate root.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar with the conversions and bounds the evaluators need.
///
/// `Send + Sync + 'static` let evaluation fan out across threads.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Shorthand for lossy conversion from `f64` literals (tolerances,
    /// quadrature nodes, dyadic factors).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert into the scalar type")
    }

    /// Lossy conversion to `f64` for diagnostics and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `2^k` for possibly negative `k`, computed exactly while in range.
pub fn pow2<R: Real>(k: i32) -> R {
    R::of(2.0).powi(k)
}
