//! Small fixed-point network trained online on the byte stream.
//!
//! ```text
//! hidden_pre = b1 + sum over context slots p of embed[p][byte_p]
//! hidden     = clamp(hidden_pre, -1, 1)
//! logits     = b2 + w2 * hidden
//! p          = softmax(logits)            (table-driven exp, 2^-16 nat steps)
//! ```
//!
//! Slot 0 is the most recent byte. Slots before the start of the stream are
//! empty and contribute nothing. Training is one SGD step on the
//! cross-entropy of the observed byte after every prediction.

use super::fixed::{exp_neg, isqrt, EXP_SCALE_BITS, FRAC_BITS, ONE};
use super::rng::XorShift64Star;
use super::{History, LearningRate};
use crate::coder::Distribution;

/// Fractional bits of softmax probabilities and logit gradients.
pub const PROB_FRAC_BITS: u32 = 30;
/// Fractional bits of [`NeuralModel::output_gradient`] entries.
pub const GRAD_FRAC_BITS: u32 = PROB_FRAC_BITS + FRAC_BITS;

const SYMBOLS: usize = 256;

#[derive(Debug, Clone)]
pub struct NeuralModel {
    context: usize,
    width: usize,
    /// `[slot][byte][unit]`, Q16.16.
    embed: Vec<i32>,
    b1: Vec<i32>,
    /// `[symbol][unit]`, Q16.16.
    w2: Vec<i32>,
    b2: Vec<i32>,
}

/// Forward-pass intermediates, reused by the training step.
#[derive(Debug, Clone)]
pub struct Forward {
    hidden_pre: Vec<i32>,
    hidden: Vec<i32>,
    exps: Vec<u64>,
    exp_sum: u64,
}

impl Forward {
    pub fn hidden(&self) -> &[i32] {
        &self.hidden
    }

    /// Softmax weights at scale 2^32 relative to the largest logit.
    pub fn weights(&self) -> &[u64] {
        &self.exps
    }

    /// Probabilities in Q2.30.
    pub fn probabilities(&self) -> Vec<i64> {
        self.exps
            .iter()
            // e <= 2^32, so the shifted value fits in 62 bits.
            .map(|&e| ((e << PROB_FRAC_BITS) / self.exp_sum) as i64)
            .collect()
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::new(self.exps.clone()).expect("the largest logit has weight 2^32")
    }
}

impl NeuralModel {
    pub fn new(context: u8, width: u16, seed: u64) -> Self {
        let context = context as usize;
        let width = width as usize;
        let mut rng = XorShift64Star::new(seed);
        let embed_amp = ONE / 4;
        let out_amp = ONE / isqrt(width as u64) as i32;
        let embed = (0..context * SYMBOLS * width)
            .map(|_| rng.symmetric(embed_amp))
            .collect();
        let w2 = (0..SYMBOLS * width)
            .map(|_| rng.symmetric(out_amp))
            .collect();
        Self {
            context,
            width,
            embed,
            b1: vec![0; width],
            w2,
            b2: vec![0; SYMBOLS],
        }
    }

    pub fn context(&self) -> usize {
        self.context
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn embed(&self) -> &[i32] {
        &self.embed
    }

    pub fn hidden_bias(&self) -> &[i32] {
        &self.b1
    }

    pub fn output_weights(&self) -> &[i32] {
        &self.w2
    }

    pub fn output_bias(&self) -> &[i32] {
        &self.b2
    }

    fn embed_row(&self, slot: usize, byte: u8) -> usize {
        (slot * SYMBOLS + byte as usize) * self.width
    }

    fn slots<'h>(&self, history: &'h History) -> impl Iterator<Item = (usize, u8)> + 'h {
        (0..history.available(self.context)).map(|p| (p, history.byte_back(p)))
    }

    pub fn forward(&self, history: &History) -> Forward {
        let w = self.width;
        let mut hidden_pre = self.b1.clone();
        for (slot, byte) in self.slots(history) {
            let row = &self.embed[self.embed_row(slot, byte)..][..w];
            for (h, &e) in hidden_pre.iter_mut().zip(row) {
                *h = h.saturating_add(e);
            }
        }
        let hidden: Vec<i32> = hidden_pre.iter().map(|&h| h.clamp(-ONE, ONE)).collect();

        let logits: Vec<i64> = self
            .w2
            .chunks_exact(w)
            .zip(&self.b2)
            .map(|(row, &b)| {
                let dot: i64 = row
                    .iter()
                    .zip(&hidden)
                    .map(|(&a, &h)| a as i64 * h as i64)
                    .sum();
                b as i64 + dot / ONE as i64
            })
            .collect();
        let max = *logits.iter().max().expect("256 logits");
        let exps: Vec<u64> = logits.iter().map(|&z| exp_neg(max - z)).collect();
        let exp_sum = exps.iter().sum();
        Forward {
            hidden_pre,
            hidden,
            exps,
            exp_sum,
        }
    }

    /// Gradient of `-ln p(target)` with respect to `w2`, laid out like
    /// `w2`, with [`GRAD_FRAC_BITS`] fractional bits.
    pub fn output_gradient(&self, history: &History, target: u8) -> Vec<i64> {
        let fwd = self.forward(history);
        let g = logit_gradient(&fwd, target);
        g.iter()
            .flat_map(|&gi| fwd.hidden.iter().map(move |&h| gi * h as i64))
            .collect()
    }

    pub fn train(&mut self, history: &History, fwd: &Forward, target: u8, lr: LearningRate) {
        let w = self.width;
        let lr = lr.0 as i64;
        let g = logit_gradient(fwd, target);

        // Back-propagate into the hidden layer before touching w2.
        let mut d_hidden = vec![0i64; w];
        for (row, &gi) in self.w2.chunks_exact(w).zip(&g) {
            if gi == 0 {
                continue;
            }
            for (d, &a) in d_hidden.iter_mut().zip(row) {
                *d += a as i64 * gi;
            }
        }

        for ((row, b), &gi) in self.w2.chunks_exact_mut(w).zip(&mut self.b2).zip(&g) {
            // Q16 * Q30 / 2^16 = Q30
            let scaled = lr * gi / ONE as i64;
            if scaled == 0 {
                continue;
            }
            *b = b.saturating_sub((scaled / (1 << (PROB_FRAC_BITS - FRAC_BITS))) as i32);
            for (a, &h) in row.iter_mut().zip(&fwd.hidden) {
                *a = a.saturating_sub((scaled * h as i64 / (1i64 << PROB_FRAC_BITS)) as i32);
            }
        }

        let d_pre: Vec<i32> = d_hidden
            .iter()
            .zip(&fwd.hidden_pre)
            .map(|(&d, &pre)| {
                if pre > -ONE && pre < ONE {
                    // Q16 * Q30 / 2^30 = Q16
                    (d / (1i64 << PROB_FRAC_BITS)) as i32
                } else {
                    0
                }
            })
            .collect();
        let step: Vec<i32> = d_pre
            .iter()
            .map(|&d| (lr * d as i64 / ONE as i64) as i32)
            .collect();
        if step.iter().all(|&s| s == 0) {
            return;
        }
        for (b, &s) in self.b1.iter_mut().zip(&step) {
            *b = b.saturating_sub(s);
        }
        let slots: Vec<(usize, u8)> = self.slots(history).collect();
        for (slot, byte) in slots {
            let start = self.embed_row(slot, byte);
            for (e, &s) in self.embed[start..start + w].iter_mut().zip(&step) {
                *e = e.saturating_sub(s);
            }
        }
    }

    pub(super) fn write_state(&self, out: &mut Vec<u8>) {
        for tensor in [&self.embed, &self.b1, &self.w2, &self.b2] {
            for v in tensor.iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
}

/// `p - onehot(target)` in Q2.30.
fn logit_gradient(fwd: &Forward, target: u8) -> Vec<i64> {
    let mut g = fwd.probabilities();
    g[target as usize] -= 1 << PROB_FRAC_BITS;
    g
}

const _: () = assert!(
    EXP_SCALE_BITS + 8 < 64,
    "256 softmax weights must sum in a u64"
);
