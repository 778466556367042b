//! Deterministic online next-byte predictors.
//!
//! Every predictor is integer-only, so an encoder and a decoder fed the same
//! bytes hold bit-identical state at every step. The schedule is always
//! predict, code, then update on the coded byte.

mod config;
pub mod fixed;
mod freq;
pub mod neural;
pub mod rng;

use std::fmt;

use sha2::{Digest, Sha256};

pub use config::{LearningRate, PredictorConfig, PredictorKind};
pub use freq::FreqModel;
pub use neural::{Forward, NeuralModel};

use crate::coder::Distribution;
use crate::error::Result;

/// The last (up to) eight bytes seen, plus the stream position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    recent: u64,
    position: u64,
}

impl History {
    pub fn push(&mut self, byte: u8) {
        self.recent = (self.recent << 8) | byte as u64;
        self.position += 1;
    }

    /// Bytes packed with the most recent in the low byte.
    pub fn recent(&self) -> u64 {
        self.recent
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    /// How many of the last `want` bytes exist.
    pub fn available(&self, want: usize) -> usize {
        want.min(self.position.min(8) as usize)
    }

    /// The byte `back` positions ago; 0 is the most recent.
    pub fn byte_back(&self, back: usize) -> u8 {
        (self.recent >> (8 * back)) as u8
    }
}

#[derive(Debug, Clone)]
enum Model {
    Uniform,
    Freq(FreqModel),
    Neural(NeuralModel),
}

/// 128-bit digest of a predictor's complete state.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateDigest(pub [u8; 16]);

impl fmt::Display for StateDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StateDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateDigest({self})")
    }
}

/// A prediction together with whatever the model needs to learn from it.
#[derive(Debug, Clone)]
pub struct Forecast {
    distribution: Distribution,
    forward: Option<Forward>,
}

impl Forecast {
    pub fn distribution(&self) -> &Distribution {
        &self.distribution
    }
}

#[derive(Debug, Clone)]
pub struct PredictorState {
    config: PredictorConfig,
    history: History,
    model: Model,
}

impl PredictorState {
    pub fn init(config: &PredictorConfig) -> Result<Self> {
        config.validate()?;
        let model = match config.kind {
            PredictorKind::Uniform => Model::Uniform,
            PredictorKind::Freq { order } => Model::Freq(FreqModel::new(order)),
            PredictorKind::Neural { context, width } => {
                Model::Neural(NeuralModel::new(context, width, config.seed))
            }
        };
        Ok(Self {
            config: *config,
            history: History::default(),
            model,
        })
    }

    pub fn config(&self) -> &PredictorConfig {
        &self.config
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    /// Number of updates applied so far.
    pub fn position(&self) -> u64 {
        self.history.position
    }

    pub fn neural(&self) -> Option<&NeuralModel> {
        match &self.model {
            Model::Neural(n) => Some(n),
            _ => None,
        }
    }

    pub fn freq(&self) -> Option<&FreqModel> {
        match &self.model {
            Model::Freq(f) => Some(f),
            _ => None,
        }
    }

    pub fn forecast(&self) -> Forecast {
        match &self.model {
            Model::Uniform => Forecast {
                distribution: Distribution::uniform(256).expect("256 symbols"),
                forward: None,
            },
            Model::Freq(f) => Forecast {
                distribution: f.predict(&self.history),
                forward: None,
            },
            Model::Neural(n) => {
                let fwd = n.forward(&self.history);
                Forecast {
                    distribution: fwd.distribution(),
                    forward: Some(fwd),
                }
            }
        }
    }

    /// Next-byte distribution. Does not change the state.
    pub fn predict(&self) -> Distribution {
        self.forecast().distribution
    }

    /// Updates on `byte`, reusing the forward pass computed by
    /// [`forecast`](Self::forecast) at the current position.
    pub fn learn(&mut self, forecast: &Forecast, byte: u8) {
        match (&mut self.model, &forecast.forward) {
            (Model::Neural(n), Some(fwd)) => {
                n.train(&self.history, fwd, byte, self.config.learning_rate);
                self.history.push(byte);
            }
            _ => self.update(byte),
        }
    }

    pub fn update(&mut self, byte: u8) {
        match &mut self.model {
            Model::Uniform => {}
            Model::Freq(f) => f.update(&self.history, byte),
            Model::Neural(n) => {
                let fwd = n.forward(&self.history);
                n.train(&self.history, &fwd, byte, self.config.learning_rate);
            }
        }
        self.history.push(byte);
    }

    /// Canonical serialization hashed by [`digest`](Self::digest):
    ///
    /// ```text
    /// "KZST" | config bytes | position u64 LE | recent-bytes u64 LE | model
    /// model (freq):   context count u64 LE, then per context in key order
    ///                 key u32 LE and 256 counts u16 LE (all-ones contexts omitted)
    /// model (neural): embed, hidden bias, output weights, output bias as i32 LE
    /// ```
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"KZST");
        out.extend_from_slice(&self.config.to_bytes());
        out.extend_from_slice(&self.history.position.to_le_bytes());
        out.extend_from_slice(&self.history.recent.to_le_bytes());
        match &self.model {
            Model::Uniform => {}
            Model::Freq(f) => {
                let tables = f.canonical_tables();
                out.extend_from_slice(&(tables.len() as u64).to_le_bytes());
                for (key, counts) in tables {
                    out.extend_from_slice(&key.to_le_bytes());
                    for c in counts {
                        out.extend_from_slice(&c.to_le_bytes());
                    }
                }
            }
            Model::Neural(n) => n.write_state(&mut out),
        }
        out
    }

    /// First 16 bytes of SHA-256 over [`canonical_bytes`](Self::canonical_bytes).
    pub fn digest(&self) -> StateDigest {
        let hash = Sha256::digest(self.canonical_bytes());
        let mut d = [0u8; 16];
        d.copy_from_slice(&hash[..16]);
        StateDigest(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(spec: &str) -> PredictorState {
        PredictorState::init(&PredictorConfig::new(spec.parse().unwrap(), 42)).unwrap()
    }

    #[test]
    fn init_is_deterministic() {
        for spec in ["uniform", "freq:2", "neural:3,16"] {
            assert_eq!(state(spec).digest(), state(spec).digest());
        }
        let a = PredictorState::init(&PredictorConfig::new("neural:2,16".parse().unwrap(), 1));
        let b = PredictorState::init(&PredictorConfig::new("neural:2,16".parse().unwrap(), 2));
        assert_ne!(a.unwrap().digest(), b.unwrap().digest());
    }

    #[test]
    fn order_zero_starts_uniform() {
        let s = state("freq:0");
        assert!(s.predict().weights().iter().all(|&w| w == 1));
        assert!(state("uniform").predict().weights().iter().all(|&w| w == 1));
    }

    #[test]
    fn observed_byte_gains_mass() {
        let mut s = state("freq:0");
        let before = s.predict().probability(b'z' as usize);
        s.update(b'z');
        assert!(s.predict().probability(b'z' as usize) > before);
    }

    #[test]
    fn predict_does_not_mutate() {
        let mut s = state("neural:2,16");
        s.update(1);
        let d = s.digest();
        let _ = s.predict();
        assert_eq!(s.digest(), d);
    }

    #[test]
    fn single_count_changes_digest() {
        let mut a = state("freq:1");
        let mut b = state("freq:1");
        a.update(b'x');
        b.update(b'x');
        assert_eq!(a.digest(), b.digest());
        a.update(b'y');
        b.update(b'z');
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn learn_matches_update() {
        let mut a = state("neural:2,16");
        let mut b = state("neural:2,16");
        let mut f = state("freq:2");
        let mut g = state("freq:2");
        for &byte in b"online learning" {
            let fc = a.forecast();
            a.learn(&fc, byte);
            b.update(byte);
            let fc = f.forecast();
            f.learn(&fc, byte);
            g.update(byte);
        }
        assert_eq!(a.digest(), b.digest());
        assert_eq!(f.digest(), g.digest());
    }

    #[test]
    fn rejects_invalid_config() {
        let c = PredictorConfig::new(PredictorKind::Freq { order: 5 }, 0);
        assert!(PredictorState::init(&c).is_err());
    }
}
