use serde::Serialize;

use super::artifact::{CompressedArtifact, MAX_INPUT_LEN};
use crate::coder::{quantize_distribution, Decoder, Encoder};
use crate::error::{Error, Result};
use crate::predictors::{PredictorConfig, PredictorState, StateDigest};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SessionOptions {
    /// Record the predictor digest at position 0 and after every
    /// `n`-th update (and after the last one).
    pub digest_every: Option<u64>,
    /// Keep the per-byte ideal bit costs and slot widths.
    pub per_token_bits: bool,
}

impl SessionOptions {
    pub fn audit() -> Self {
        Self {
            digest_every: Some(1),
            per_token_bits: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SessionStats {
    pub input_bytes: u64,
    /// `sum -log2(width / 2^16)` over the coded bytes.
    pub ideal_bits: f64,
    pub payload_bits: u64,
    /// Present when [`SessionOptions::per_token_bits`] is set.
    pub token_bits: Vec<f64>,
    /// Slot width (out of 2^16) of each coded byte, same condition.
    /// `ideal_bits` is exactly `sum(16 - log2 width)`.
    pub token_widths: Vec<u32>,
    pub digests: Vec<(u64, StateDigest)>,
}

impl SessionStats {
    /// Payload bits per input byte.
    pub fn bpb(&self) -> f64 {
        if self.input_bytes == 0 {
            0.0
        } else {
            self.payload_bits as f64 / self.input_bytes as f64
        }
    }

    pub fn ideal_bpb(&self) -> f64 {
        if self.input_bytes == 0 {
            0.0
        } else {
            self.ideal_bits / self.input_bytes as f64
        }
    }

    /// Coder overhead `payload_bits - ideal_bits`.
    pub fn overhead_bits(&self) -> f64 {
        self.payload_bits as f64 - self.ideal_bits
    }

    pub fn report(&self, config: &PredictorConfig) -> Report {
        Report {
            config: config.kind.to_string(),
            input_bytes: self.input_bytes,
            payload_bytes: self.payload_bits / 8,
            ideal_bits: self.ideal_bits,
            bpb: self.bpb(),
        }
    }
}

/// One line of machine-readable output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: String,
    pub input_bytes: u64,
    pub payload_bytes: u64,
    pub ideal_bits: f64,
    pub bpb: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

struct DigestLog {
    every: Option<u64>,
    entries: Vec<(u64, StateDigest)>,
}

impl DigestLog {
    fn new(every: Option<u64>, state: &PredictorState) -> Self {
        let mut log = Self {
            every: every.filter(|&n| n > 0),
            entries: Vec::new(),
        };
        if log.every.is_some() {
            log.entries.push((state.position(), state.digest()));
        }
        log
    }

    fn observe(&mut self, state: &PredictorState, last: bool) {
        if let Some(n) = self.every {
            let pos = state.position();
            if pos.is_multiple_of(n) || last {
                self.entries.push((pos, state.digest()));
            }
        }
    }
}

fn primed(config: &PredictorConfig, context: &[u8]) -> Result<PredictorState> {
    let mut state = PredictorState::init(config)?;
    for &b in context {
        state.update(b);
    }
    Ok(state)
}

fn encode_session(
    mut state: PredictorState,
    input: &[u8],
    context_len: u64,
    options: SessionOptions,
) -> (CompressedArtifact, SessionStats) {
    let mut enc = Encoder::new();
    let mut stats = SessionStats {
        input_bytes: input.len() as u64,
        ..SessionStats::default()
    };
    let mut log = DigestLog::new(options.digest_every, &state);
    for (i, &byte) in input.iter().enumerate() {
        let forecast = state.forecast();
        let table = quantize_distribution(forecast.distribution());
        enc.encode(&table, byte as usize);
        let bits = table.ideal_bits(byte as usize);
        stats.ideal_bits += bits;
        if options.per_token_bits {
            stats.token_bits.push(bits);
            stats.token_widths.push(table.width(byte as usize));
        }
        state.learn(&forecast, byte);
        log.observe(&state, i + 1 == input.len());
    }
    let payload = enc.finish();
    stats.payload_bits = payload.len() as u64 * 8;
    stats.digests = log.entries;
    let artifact = CompressedArtifact {
        config: *state.config(),
        context_len,
        token_count: input.len() as u64,
        payload,
    };
    (artifact, stats)
}

fn check_len(input: &[u8]) -> Result<()> {
    if input.len() as u64 >= MAX_INPUT_LEN {
        return Err(Error::InputTooLong(format!(
            "{} bytes, limit is 2^48 - 1",
            input.len()
        )));
    }
    Ok(())
}

pub fn compress(
    input: &[u8],
    config: &PredictorConfig,
) -> Result<(CompressedArtifact, SessionStats)> {
    compress_with(input, config, SessionOptions::default())
}

pub fn compress_with(
    input: &[u8],
    config: &PredictorConfig,
    options: SessionOptions,
) -> Result<(CompressedArtifact, SessionStats)> {
    compress_conditional_with(input, &[], config, options)
}

/// Codes `target` after priming the predictor on `context`, which is not
/// stored: the decoder must be handed the same context.
pub fn compress_conditional(
    target: &[u8],
    context: &[u8],
    config: &PredictorConfig,
) -> Result<(CompressedArtifact, SessionStats)> {
    compress_conditional_with(target, context, config, SessionOptions::default())
}

pub fn compress_conditional_with(
    target: &[u8],
    context: &[u8],
    config: &PredictorConfig,
    options: SessionOptions,
) -> Result<(CompressedArtifact, SessionStats)> {
    check_len(target)?;
    check_len(context)?;
    let state = primed(config, context)?;
    Ok(encode_session(state, target, context.len() as u64, options))
}

/// Decoder-side record of the predictor's digests.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeTrace {
    pub digests: Vec<(u64, StateDigest)>,
}

pub fn decompress(artifact: &CompressedArtifact) -> Result<Vec<u8>> {
    decompress_conditional_with(artifact, &[], None).map(|(out, _)| out)
}

/// Decodes an artifact made by [`compress_conditional`]. A context of the
/// right length but different content decodes without error to garbage.
pub fn decompress_conditional(artifact: &CompressedArtifact, context: &[u8]) -> Result<Vec<u8>> {
    decompress_conditional_with(artifact, context, None).map(|(out, _)| out)
}

pub fn decompress_conditional_with(
    artifact: &CompressedArtifact,
    context: &[u8],
    digest_every: Option<u64>,
) -> Result<(Vec<u8>, DecodeTrace)> {
    if artifact.context_len != context.len() as u64 {
        return Err(Error::ContextMismatch {
            expected: artifact.context_len,
            supplied: context.len() as u64,
        });
    }
    let mut state = primed(&artifact.config, context)?;
    let mut dec = Decoder::new(&artifact.payload)?;
    let n = artifact.token_count;
    let mut out = Vec::with_capacity(n.min(1 << 30) as usize);
    let mut log = DigestLog::new(digest_every, &state);
    for i in 0..n {
        let forecast = state.forecast();
        let table = quantize_distribution(forecast.distribution());
        let byte = dec.decode(&table)? as u8;
        state.learn(&forecast, byte);
        out.push(byte);
        log.observe(&state, i + 1 == n);
    }
    if !dec.is_exhausted() {
        return Err(Error::Format(format!(
            "{} payload bytes left after decoding",
            artifact.payload.len() - dec.cursor()
        )));
    }
    Ok((
        out,
        DecodeTrace {
            digests: log.entries,
        },
    ))
}
