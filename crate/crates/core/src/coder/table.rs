use crate::error::{Error, Result};

/// Bits of probability resolution used by the range coder.
pub const PROB_BITS: u32 = 16;
/// Total of every [`CumulativeTable`].
pub const PROB_SCALE: u32 = 1 << PROB_BITS;
/// Largest alphabet a table can hold with every slot at least one wide.
pub const MAX_ALPHABET: usize = PROB_SCALE as usize;

/// Nonnegative integer weights over an alphabet, not necessarily normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<u64>,
}

impl Distribution {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.len() > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge(weights.len()));
        }
        if weights.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "alphabet size {} is below 2",
                weights.len()
            )));
        }
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        Ok(Self { weights })
    }

    pub fn uniform(alphabet: usize) -> Result<Self> {
        Self::new(vec![1; alphabet])
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn alphabet_size(&self) -> usize {
        self.weights.len()
    }

    pub fn total(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).sum()
    }

    /// Unquantized probability of `sym`, for cross-entropy bookkeeping.
    pub fn probability(&self, sym: usize) -> f64 {
        self.weights[sym] as f64 / self.total() as f64
    }
}

/// Cumulative frequencies summing to [`PROB_SCALE`], every slot nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeTable {
    cum: Vec<u32>,
}

impl CumulativeTable {
    /// Builds a table from explicit slot widths.
    pub fn from_widths(widths: &[u32]) -> Result<Self> {
        if widths.len() > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge(widths.len()));
        }
        if widths.len() < 2 {
            return Err(Error::InvalidDistribution("alphabet size below 2".into()));
        }
        let mut cum = Vec::with_capacity(widths.len() + 1);
        let mut acc = 0u64;
        cum.push(0);
        for &w in widths {
            if w == 0 {
                return Err(Error::InvalidDistribution("zero-width slot".into()));
            }
            acc += w as u64;
            if acc > PROB_SCALE as u64 {
                break;
            }
            cum.push(acc as u32);
        }
        if acc != PROB_SCALE as u64 {
            return Err(Error::InvalidDistribution(format!(
                "widths sum to {acc}, expected {PROB_SCALE}"
            )));
        }
        Ok(Self { cum })
    }

    pub fn alphabet_size(&self) -> usize {
        self.cum.len() - 1
    }

    pub fn start(&self, sym: usize) -> u32 {
        self.cum[sym]
    }

    pub fn end(&self, sym: usize) -> u32 {
        self.cum[sym + 1]
    }

    pub fn width(&self, sym: usize) -> u32 {
        self.cum[sym + 1] - self.cum[sym]
    }

    pub fn widths(&self) -> impl Iterator<Item = u32> + '_ {
        self.cum.windows(2).map(|w| w[1] - w[0])
    }

    /// `-log2(width / 2^16)`: the information cost of coding `sym`.
    pub fn ideal_bits(&self, sym: usize) -> f64 {
        PROB_BITS as f64 - (self.width(sym) as f64).log2()
    }

    /// The symbol whose slot `[start, end)` contains `target`.
    pub fn symbol_for(&self, target: u32) -> usize {
        debug_assert!(target < PROB_SCALE);
        self.cum.partition_point(|&c| c <= target) - 1
    }
}

/// Apportions the 2^16 total among symbols.
///
/// Each symbol first receives one unit. The remaining `2^16 - n` units are
/// split proportionally to the weights; floors are taken, and leftover units
/// go to the largest remainders, lower index first among equal remainders.
pub fn quantize_distribution(d: &Distribution) -> CumulativeTable {
    let n = d.alphabet_size();
    let free = (PROB_SCALE as usize - n) as u128;
    let total = d.total();

    let mut widths = Vec::with_capacity(n);
    let mut rems = Vec::with_capacity(n);
    let mut assigned = 0u128;
    if total <= (u64::MAX >> PROB_BITS) as u128 {
        // free * w <= free * total < 2^64
        let (free64, total64) = (free as u64, total as u64);
        for &w in d.weights() {
            let num = free64 * w;
            let base = num / total64;
            assigned += base as u128;
            widths.push(1 + base as u32);
            rems.push((num % total64) as u128);
        }
    } else {
        for &w in d.weights() {
            let num = free * w as u128;
            let base = num / total;
            assigned += base;
            widths.push(1 + base as u32);
            rems.push(num % total);
        }
    }

    let leftover = (free - assigned) as usize;
    if leftover > 0 {
        let mut order: Vec<usize> = (0..n).collect();
        let by_rem = |a: &usize, b: &usize| rems[*b].cmp(&rems[*a]).then(a.cmp(b));
        if leftover < n {
            order.select_nth_unstable_by(leftover - 1, by_rem);
        }
        for &i in &order[..leftover] {
            widths[i] += 1;
        }
    }

    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0u32);
    let mut acc = 0u32;
    for w in widths {
        acc += w;
        cum.push(acc);
    }
    debug_assert_eq!(acc, PROB_SCALE);
    CumulativeTable { cum }
}
