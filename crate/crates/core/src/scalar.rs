//! Scalar abstraction for the floating-point math.
//!
//! All geometry, distance and likelihood computations are generic over
//! [`Real`]; `f64` is the default used by the concrete aliases at the
//! crate root, `f32` works wherever memory matters more than precision.

use std::fmt::{Debug, Display};
use std::str::FromStr;

/// Floating-point scalar: f32 or f64.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumAssignOps
    + FromStr
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for constants and config values.
    fn from_config(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any Real")
    }
}

impl<T> Real for T where
    T: num_traits::Float
        + num_traits::FromPrimitive
        + num_traits::NumAssignOps
        + FromStr
        + Display
        + Debug
        + Send
        + Sync
        + 'static
{
}
