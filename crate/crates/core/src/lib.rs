//! Lossless compression by online learning, and a brute-force
//! conditional-complexity workbench.
//!
//! A predictor assigns a distribution to the next byte, the range coder
//! narrows its interval by the byte actually seen, and the predictor then
//! updates on that byte. The decoder repeats the same predict/update
//! schedule, so model parameters are never stored in the output.

pub mod bits;
pub mod coder;
pub mod error;
pub mod kclab;
pub mod pipeline;
pub mod predictors;
pub mod scalar;
pub mod sources;

pub use bits::BitString;
pub use error::{Error, Result};

/// Arbitrary-precision rational used for exact interval arithmetic.
pub type Rational = num_rational::BigRational;
/// Interval refinement in exact arithmetic.
pub type ExactInterval = coder::IdealInterval<Rational>;
/// Interval refinement in `f64`, for quick estimates only.
pub type FloatInterval = coder::IdealInterval<f64>;
