use std::collections::HashMap;

use super::History;
use crate::coder::Distribution;

/// Counts reaching this value trigger halving of their context.
const COUNT_LIMIT: u32 = 1 << 16;

type Counts = Box<[u16; 256]>;

/// Order-k add-one frequency model. Contexts never updated are implicitly
/// all ones and are not stored.
#[derive(Debug, Clone)]
pub struct FreqModel {
    order: usize,
    tables: HashMap<u32, Counts>,
}

impl FreqModel {
    pub fn new(order: u8) -> Self {
        Self {
            order: order as usize,
            tables: HashMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Context key: number of context bytes in the top byte, the bytes below.
    /// Early positions use a shorter context; position 0 has the empty one.
    pub fn context_key(&self, history: &History) -> u32 {
        let len = history.available(self.order);
        let bytes = if len == 0 {
            0
        } else {
            (history.recent() & ((1u64 << (8 * len)) - 1)) as u32
        };
        ((len as u32) << 24) | bytes
    }

    pub fn counts(&self, history: &History) -> [u16; 256] {
        match self.tables.get(&self.context_key(history)) {
            Some(c) => **c,
            None => [1; 256],
        }
    }

    pub fn predict(&self, history: &History) -> Distribution {
        let weights = self.counts(history).iter().map(|&c| c as u64).collect();
        Distribution::new(weights).expect("counts are positive")
    }

    pub fn update(&mut self, history: &History, byte: u8) {
        let key = self.context_key(history);
        let counts = self.tables.entry(key).or_insert_with(|| Box::new([1; 256]));
        let next = counts[byte as usize] as u32 + 1;
        if next >= COUNT_LIMIT {
            counts[byte as usize] = (next / 2) as u16;
            for (i, c) in counts.iter_mut().enumerate() {
                if i != byte as usize {
                    *c = (*c).div_ceil(2);
                }
            }
        } else {
            counts[byte as usize] = next as u16;
        }
    }

    /// Stored contexts in key order, skipping any that hold only the prior.
    pub(super) fn canonical_tables(&self) -> Vec<(u32, &[u16; 256])> {
        let mut out: Vec<(u32, &[u16; 256])> = self
            .tables
            .iter()
            .filter(|(_, c)| c.iter().any(|&v| v != 1))
            .map(|(k, c)| (*k, &**c))
            .collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }
}
