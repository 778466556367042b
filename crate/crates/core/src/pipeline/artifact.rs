//! Artifact layout (all integers little-endian):
//!
//! ```text
//! "KZV1" | version u8 = 1 | config-block length u16 | config block
//!        | token count d (unsigned LEB128) | payload length u64 | payload
//! ```
//!
//! The config block is the canonical predictor config. Artifacts made with
//! a conditioning context append the context length as LEB128 inside the
//! block; unconditioned artifacts carry nothing extra, so an empty context
//! yields the same bytes as plain compression.

use crate::error::{Error, Result};
use crate::predictors::PredictorConfig;

pub const MAGIC: [u8; 4] = *b"KZV1";
pub const VERSION: u8 = 1;
/// Inputs must be shorter than 2^48 bytes.
pub const MAX_INPUT_LEN: u64 = 1 << 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedArtifact {
    pub config: PredictorConfig,
    /// Bytes of conditioning context the predictor was primed with.
    pub context_len: u64,
    /// Number of bytes to decode.
    pub token_count: u64,
    pub payload: Vec<u8>,
}

impl CompressedArtifact {
    fn config_block(&self) -> Vec<u8> {
        let mut block = self.config.to_bytes();
        if self.context_len > 0 {
            write_leb128(&mut block, self.context_len);
        }
        block
    }

    /// Header bytes: everything except the payload itself.
    pub fn header_len(&self) -> usize {
        let mut d = Vec::new();
        write_leb128(&mut d, self.token_count);
        MAGIC.len() + 1 + 2 + self.config_block().len() + d.len() + 8
    }

    pub fn serialize(&self) -> Vec<u8> {
        let block = self.config_block();
        let mut out = Vec::with_capacity(32 + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&(block.len() as u16).to_le_bytes());
        out.extend_from_slice(&block);
        write_leb128(&mut out, self.token_count);
        out.extend_from_slice(&(self.payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = r.take(1)?[0];
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let block_len = u16::from_le_bytes(r.take(2)?.try_into().unwrap()) as usize;
        let block = r.take(block_len)?;
        let (config, used) = PredictorConfig::from_bytes(block)?;
        let context_len = if used == block.len() {
            0
        } else {
            let mut br = Reader {
                bytes: &block[used..],
                at: 0,
            };
            let n = br.leb128()?;
            if br.at != br.bytes.len() || n == 0 {
                return Err(Error::Format("malformed context length".into()));
            }
            n
        };
        let token_count = r.leb128()?;
        if token_count >= MAX_INPUT_LEN {
            return Err(Error::Format(format!(
                "token count {token_count} too large"
            )));
        }
        let payload_len = u64::from_le_bytes(r.take(8)?.try_into().unwrap());
        let remaining = (bytes.len() - r.at) as u64;
        if payload_len != remaining {
            return Err(Error::Format(format!(
                "payload length {payload_len} but {remaining} bytes follow"
            )));
        }
        Ok(Self {
            config,
            context_len,
            token_count,
            payload: bytes[r.at..].to_vec(),
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("artifact truncated".into()))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    /// Minimal-length unsigned LEB128 only, so parsing is a bijection.
    fn leb128(&mut self) -> Result<u64> {
        let mut value = 0u64;
        for i in 0..10 {
            let b = self.take(1)?[0];
            let bits = (b & 0x7F) as u64;
            if i == 9 && bits > 1 {
                return Err(Error::Format("LEB128 overflows u64".into()));
            }
            value |= bits << (7 * i);
            if b & 0x80 == 0 {
                if i > 0 && b == 0 {
                    return Err(Error::Format("non-minimal LEB128".into()));
                }
                return Ok(value);
            }
        }
        Err(Error::Format("LEB128 too long".into()))
    }
}

pub fn write_leb128(out: &mut Vec<u8>, mut value: u64) {
    loop {
        let b = (value & 0x7F) as u8;
        value >>= 7;
        if value == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}
