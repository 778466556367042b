//! Scalar traits shared by the exact-interval and entropy code.
//!
//! Integer coding paths never go through these; they exist so the same
//! interval refinement can run over exact rationals (golden tests) or
//! machine floats (quick estimates).

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num};

/// Any ordered field-like number: `BigRational`, `f64`, `f32`.
pub trait Scalar: Num + Clone + PartialOrd + Debug {}
impl<T: Num + Clone + PartialOrd + Debug> Scalar for T {}

/// Floating-point scalars used for entropy and cross-entropy estimates.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync {}
impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn two<T: Scalar>() -> T {
    T::one() + T::one()
}
