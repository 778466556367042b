//! Sender/receiver protocol: predict, code, update, for every byte.

mod artifact;
mod ladder;
mod session;

pub use artifact::{write_leb128, CompressedArtifact, MAGIC, MAX_INPUT_LEN, VERSION};
pub use ladder::scaling_ladder;
pub use session::{
    compress, compress_conditional, compress_conditional_with, compress_with, decompress,
    decompress_conditional, decompress_conditional_with, DecodeTrace, Report, SessionOptions,
    SessionStats,
};
