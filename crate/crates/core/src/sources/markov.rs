use crate::error::{Error, Result};
use crate::predictors::rng::XorShift64Star;
use crate::scalar::Real;

/// Largest transition table accepted (rows x alphabet).
pub const MAX_TABLE_ENTRIES: usize = 1 << 22;
/// Power iteration stops once the L1 change drops below this.
pub const STATIONARY_TOLERANCE: f64 = 1e-12;
const MAX_POWER_ITERATIONS: usize = 1_000_000;
const GENERATE_STREAM: u64 = 0x6765_6e65_7261_7465;

/// Order-k Markov source over symbols `0..alphabet`, emitted as raw bytes.
///
/// Row `s` of the table holds integer weights for the next symbol given the
/// last `order` symbols encoded in base `alphabet` (most recent lowest).
/// Probabilities are the exact rationals `weight / row_sum`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovSpec {
    order: u8,
    alphabet: u16,
    weights: Vec<u32>,
    seed: u64,
}

impl MarkovSpec {
    /// Random table: each weight is `concentration + d^3` for `d` uniform in
    /// `0..16`. Large concentrations give near-uniform rows, 1 gives peaked ones.
    pub fn random(order: u8, alphabet: u16, concentration: u32, seed: u64) -> Result<Self> {
        if concentration == 0 {
            return Err(Error::InvalidSource(
                "concentration must be at least 1".into(),
            ));
        }
        let entries = table_entries(order, alphabet)?;
        let mut rng = XorShift64Star::new(seed);
        let weights = (0..entries)
            .map(|_| {
                let d = rng.below(16) as u32;
                concentration.saturating_add(d * d * d)
            })
            .collect();
        Self::from_weights(order, alphabet, weights, seed)
    }

    pub fn uniform(order: u8, alphabet: u16, seed: u64) -> Result<Self> {
        let entries = table_entries(order, alphabet)?;
        Self::from_weights(order, alphabet, vec![1; entries], seed)
    }

    /// Explicit table. Zero weights are accepted as long as every row has
    /// some mass; entropy-rate results then assume the chain is ergodic.
    pub fn from_weights(order: u8, alphabet: u16, weights: Vec<u32>, seed: u64) -> Result<Self> {
        let entries = table_entries(order, alphabet)?;
        if weights.len() != entries {
            return Err(Error::InvalidSource(format!(
                "expected {entries} weights, got {}",
                weights.len()
            )));
        }
        for row in weights.chunks_exact(alphabet as usize) {
            let sum: u64 = row.iter().map(|&w| w as u64).sum();
            if sum == 0 || sum > u32::MAX as u64 {
                return Err(Error::InvalidSource(format!("row sum {sum} out of range")));
            }
        }
        Ok(Self {
            order,
            alphabet,
            weights,
            seed,
        })
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn alphabet(&self) -> u16 {
        self.alphabet
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn states(&self) -> usize {
        self.weights.len() / self.alphabet as usize
    }

    pub fn row(&self, state: usize) -> &[u32] {
        let a = self.alphabet as usize;
        &self.weights[state * a..(state + 1) * a]
    }

    pub fn row_sum(&self, state: usize) -> u64 {
        self.row(state).iter().map(|&w| w as u64).sum()
    }

    /// State reached from `state` after emitting `sym`.
    pub fn next_state(&self, state: usize, sym: usize) -> usize {
        if self.order == 0 {
            0
        } else {
            (state * self.alphabet as usize + sym) % self.states()
        }
    }

    /// State after the given symbols (only the last `order` matter).
    pub fn state_after(&self, symbols: &[u8]) -> usize {
        symbols
            .iter()
            .fold(0, |s, &b| self.next_state(s, b as usize))
    }

    pub fn probability(&self, state: usize, sym: usize) -> f64 {
        self.row(state)[sym] as f64 / self.row_sum(state) as f64
    }

    /// `n` symbols: the first `order` drawn uniformly, the rest from the chain.
    pub fn generate(&self, n: usize) -> Result<Vec<u8>> {
        if n == 0 {
            return Err(Error::InvalidSource("length must be at least 1".into()));
        }
        let mut rng = XorShift64Star::new(self.seed ^ GENERATE_STREAM);
        let a = self.alphabet as u64;
        let mut out = Vec::with_capacity(n);
        let mut state = 0usize;
        for i in 0..n {
            let sym = if i < self.order as usize {
                rng.below(a) as usize
            } else {
                let row = self.row(state);
                let mut r = rng.below(self.row_sum(state));
                row.iter()
                    .position(|&w| {
                        if r < w as u64 {
                            true
                        } else {
                            r -= w as u64;
                            false
                        }
                    })
                    .expect("draw below row sum")
            };
            out.push(sym as u8);
            state = self.next_state(state, sym);
        }
        Ok(out)
    }

    /// Stationary distribution over states by power iteration from uniform.
    pub fn stationary<T: Real>(&self) -> Vec<T> {
        let n = self.states();
        let a = self.alphabet as usize;
        let mut pi = vec![T::one() / T::from_usize(n).unwrap(); n];
        if self.order == 0 {
            return pi;
        }
        let tol = T::from_f64(STATIONARY_TOLERANCE)
            .unwrap()
            .max(T::epsilon() * T::from_usize(16 * n).unwrap());
        let probs: Vec<T> = (0..n)
            .flat_map(|s| {
                let sum = T::from_u64(self.row_sum(s)).unwrap();
                self.row(s)
                    .iter()
                    .map(move |&w| T::from_u32(w).unwrap() / sum)
            })
            .collect();
        let mut next = vec![T::zero(); n];
        for _ in 0..MAX_POWER_ITERATIONS {
            next.iter_mut().for_each(|v| *v = T::zero());
            for s in 0..n {
                for sym in 0..a {
                    let t = self.next_state(s, sym);
                    next[t] = next[t] + pi[s] * probs[s * a + sym];
                }
            }
            let residual = pi
                .iter()
                .zip(&next)
                .fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs());
            std::mem::swap(&mut pi, &mut next);
            if residual < tol {
                break;
            }
        }
        pi
    }

    /// Entropy rate in bits per symbol: row entropies weighted by the
    /// stationary distribution.
    pub fn entropy_rate<T: Real>(&self) -> T {
        let pi = self.stationary::<T>();
        (0..self.states())
            .map(|s| pi[s] * row_entropy::<T>(self.row(s)))
            .fold(T::zero(), |a, b| a + b)
    }
}

pub fn entropy_rate<T: Real>(spec: &MarkovSpec) -> T {
    spec.entropy_rate()
}

fn row_entropy<T: Real>(row: &[u32]) -> T {
    let total = T::from_u64(row.iter().map(|&w| w as u64).sum()).unwrap();
    row.iter()
        .filter(|&&w| w > 0)
        .map(|&w| {
            let p = T::from_u32(w).unwrap() / total;
            -p * p.log2()
        })
        .fold(T::zero(), |a, b| a + b)
}

fn table_entries(order: u8, alphabet: u16) -> Result<usize> {
    if order > 3 {
        return Err(Error::InvalidSource(format!("order {order} outside 0..=3")));
    }
    if !(1..=256).contains(&alphabet) {
        return Err(Error::InvalidSource(format!(
            "alphabet {alphabet} outside 1..=256"
        )));
    }
    let entries = (alphabet as usize).pow(order as u32 + 1);
    if entries > MAX_TABLE_ENTRIES {
        return Err(Error::InvalidSource(format!(
            "table of {entries} entries exceeds {MAX_TABLE_ENTRIES}"
        )));
    }
    Ok(entries)
}
