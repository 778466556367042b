//! Arithmetic coding: integer range coder for real payloads, exact
//! interval refinement for worked examples.

mod ideal;
mod range;
mod table;

pub use ideal::{dyadic_value, ideal_refine, shortest_binary_in_interval, IdealInterval};
pub use range::{encode_all, Decoder, Encoder, FLUSH_BYTES};
pub use table::{
    quantize_distribution, CumulativeTable, Distribution, MAX_ALPHABET, PROB_BITS, PROB_SCALE,
};

/// Fixed coder overhead allowed on top of the ideal code length, in bits.
pub const OVERHEAD_BUDGET_BITS: u64 = 64;
