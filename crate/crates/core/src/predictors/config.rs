use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Learning rate in Q16.16.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LearningRate(pub u32);

impl LearningRate {
    /// 2^-6, the rate used when none is given.
    pub const DEFAULT: LearningRate = LearningRate(1 << 10);
    /// Rates at or above 16.0 are rejected.
    pub const MAX: u32 = 16 << 16;

    /// Nearest Q16.16 value to `rate`. Only meant for parsing user input;
    /// the stored representation is the integer.
    pub fn from_f64(rate: f64) -> Result<Self> {
        let raw = (rate * 65536.0).round();
        if !(raw >= 0.0 && raw < Self::MAX as f64) {
            return Err(Error::InvalidConfig(format!(
                "learning rate {rate} out of range"
            )));
        }
        Ok(Self(raw as u32))
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 65536.0
    }
}

impl Default for LearningRate {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredictorKind {
    Uniform,
    /// Add-one byte counts conditioned on the last `order` bytes.
    Freq {
        order: u8,
    },
    /// Last `context` bytes embedded into a `width`-unit hidden layer.
    Neural {
        context: u8,
        width: u16,
    },
}

impl PredictorKind {
    const TAG_UNIFORM: u8 = 0;
    const TAG_FREQ: u8 = 1;
    const TAG_NEURAL: u8 = 2;

    pub fn validate(&self) -> Result<()> {
        match *self {
            PredictorKind::Uniform => Ok(()),
            PredictorKind::Freq { order } if order <= 3 => Ok(()),
            PredictorKind::Freq { order } => Err(Error::InvalidConfig(format!(
                "freq order {order} outside 0..=3"
            ))),
            PredictorKind::Neural { context, width } => {
                if !(1..=8).contains(&context) {
                    return Err(Error::InvalidConfig(format!(
                        "neural context {context} outside 1..=8"
                    )));
                }
                if !(8..=256).contains(&width) {
                    return Err(Error::InvalidConfig(format!(
                        "neural width {width} outside 8..=256"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Trainable parameter count (count tables are not parameters).
    pub fn parameter_count(&self) -> usize {
        match *self {
            PredictorKind::Uniform | PredictorKind::Freq { .. } => 0,
            PredictorKind::Neural { context, width } => {
                let w = width as usize;
                context as usize * 256 * w + w + 256 * w + 256
            }
        }
    }
}

/// Parses `uniform`, `freq:K` or `neural:K,W`.
impl FromStr for PredictorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unrecognized model spec {s:?}"));
        let kind = match s.split_once(':') {
            None if s == "uniform" => PredictorKind::Uniform,
            Some(("freq", k)) => PredictorKind::Freq {
                order: k.parse().map_err(|_| bad())?,
            },
            Some(("neural", args)) => {
                let (k, w) = args.split_once(',').ok_or_else(bad)?;
                PredictorKind::Neural {
                    context: k.parse().map_err(|_| bad())?,
                    width: w.parse().map_err(|_| bad())?,
                }
            }
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorKind::Uniform => write!(f, "uniform"),
            PredictorKind::Freq { order } => write!(f, "freq:{order}"),
            PredictorKind::Neural { context, width } => write!(f, "neural:{context},{width}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PredictorConfig {
    pub kind: PredictorKind,
    pub seed: u64,
    pub learning_rate: LearningRate,
}

impl PredictorConfig {
    pub fn new(kind: PredictorKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            learning_rate: LearningRate::DEFAULT,
        }
    }

    pub fn with_learning_rate(mut self, lr: LearningRate) -> Self {
        self.learning_rate = lr;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if self.learning_rate.0 >= LearningRate::MAX {
            return Err(Error::InvalidConfig(
                "learning rate must be below 16.0".into(),
            ));
        }
        Ok(())
    }

    /// Canonical bytes: kind tag, kind parameters (little-endian), seed as
    /// u64 LE, learning rate as u32 LE.
    ///
    /// ```text
    /// uniform      00                      seed[8] lr[4]   13 bytes
    /// freq:K       01 K                    seed[8] lr[4]   14 bytes
    /// neural:K,W   02 K W[2]               seed[8] lr[4]   16 bytes
    /// ```
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16);
        match self.kind {
            PredictorKind::Uniform => out.push(PredictorKind::TAG_UNIFORM),
            PredictorKind::Freq { order } => {
                out.push(PredictorKind::TAG_FREQ);
                out.push(order);
            }
            PredictorKind::Neural { context, width } => {
                out.push(PredictorKind::TAG_NEURAL);
                out.push(context);
                out.extend_from_slice(&width.to_le_bytes());
            }
        }
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.learning_rate.0.to_le_bytes());
        out
    }

    /// Parses a canonical config from the front of `bytes`, returning it and
    /// the number of bytes consumed.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, usize)> {
        let short = || Error::Format("predictor config truncated".into());
        let tag = *bytes.first().ok_or_else(short)?;
        let (kind, at) = match tag {
            PredictorKind::TAG_UNIFORM => (PredictorKind::Uniform, 1),
            PredictorKind::TAG_FREQ => (
                PredictorKind::Freq {
                    order: *bytes.get(1).ok_or_else(short)?,
                },
                2,
            ),
            PredictorKind::TAG_NEURAL => {
                let b = bytes.get(1..4).ok_or_else(short)?;
                (
                    PredictorKind::Neural {
                        context: b[0],
                        width: u16::from_le_bytes([b[1], b[2]]),
                    },
                    4,
                )
            }
            other => return Err(Error::Format(format!("unknown predictor tag {other}"))),
        };
        let rest = bytes.get(at..at + 12).ok_or_else(short)?;
        let seed = u64::from_le_bytes(rest[..8].try_into().unwrap());
        let lr = u32::from_le_bytes(rest[8..].try_into().unwrap());
        let config = Self {
            kind,
            seed,
            learning_rate: LearningRate(lr),
        };
        config
            .validate()
            .map_err(|e| Error::Format(e.to_string()))?;
        Ok((config, at + 12))
    }
}
