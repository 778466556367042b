use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("alphabet of {0} symbols exceeds the 65536-symbol limit")]
    AlphabetTooLarge(usize),
    #[error("invalid predictor config: {0}")]
    InvalidConfig(String),
    #[error("invalid source spec: {0}")]
    InvalidSource(String),
    #[error("malformed artifact: {0}")]
    Format(String),
    #[error("unsupported artifact version {0}")]
    UnsupportedVersion(u8),
    #[error("payload ended after {0} bytes while decoding")]
    TruncatedStream(usize),
    #[error("conditioning context is {supplied} bytes, artifact expects {expected}")]
    ContextMismatch { expected: u64, supplied: u64 },
    #[error("input too long: {0}")]
    InputTooLong(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid bit string: {0}")]
    InvalidBits(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
