//! Exact-arithmetic arithmetic coding over nested subintervals of `[0, 1)`.
//!
//! These operations are not used by the byte coder. They compute the
//! textbook interval sequence so small sessions can be checked by hand,
//! either exactly (`BigRational`) or approximately (`f64`).

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::scalar::{two, Scalar};

/// Half-open interval `[lo, hi)` with `0 <= lo < hi <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealInterval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> IdealInterval<T> {
    pub fn unit() -> Self {
        Self {
            lo: T::zero(),
            hi: T::one(),
        }
    }

    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo < T::zero() || hi > T::one() || lo >= hi {
            return Err(Error::InvalidDistribution(format!(
                "[{lo:?}, {hi:?}) is not a nonempty subinterval of [0, 1)"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, value: &T) -> bool {
        &self.lo <= value && value < &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Sub-interval of `sym` when this interval is split in proportion to
    /// `probs`. Weights need not be normalized.
    pub fn refine(&self, probs: &[T], sym: usize) -> Result<Self> {
        let total = checked_total(probs)?;
        if sym >= probs.len() || probs[sym] <= T::zero() {
            return Err(Error::InvalidDistribution(format!(
                "symbol {sym} has no probability mass"
            )));
        }
        let before = probs[..sym].iter().cloned().fold(T::zero(), |a, b| a + b);
        let through = before.clone() + probs[sym].clone();
        let w = self.width();
        Ok(Self {
            lo: self.lo.clone() + before * w.clone() / total.clone(),
            hi: self.lo.clone() + through * w / total,
        })
    }

    /// Inverse of [`refine`](Self::refine): finds the symbol whose
    /// sub-interval contains `value`.
    pub fn locate(&self, probs: &[T], value: &T) -> Result<Option<(usize, Self)>> {
        checked_total(probs)?;
        for sym in 0..probs.len() {
            if probs[sym] <= T::zero() {
                continue;
            }
            let sub = self.refine(probs, sym)?;
            if sub.contains(value) {
                return Ok(Some((sym, sub)));
            }
        }
        Ok(None)
    }
}

fn checked_total<T: Scalar>(probs: &[T]) -> Result<T> {
    if probs.iter().any(|p| *p < T::zero()) {
        return Err(Error::InvalidDistribution("negative weight".into()));
    }
    let total = probs.iter().cloned().fold(T::zero(), |a, b| a + b);
    if total <= T::zero() {
        return Err(Error::InvalidDistribution("weights sum to zero".into()));
    }
    Ok(total)
}

pub fn ideal_refine<T: Scalar>(
    interval: &IdealInterval<T>,
    probs: &[T],
    sym: usize,
) -> Result<IdealInterval<T>> {
    interval.refine(probs, sym)
}

/// Value of the binary fraction `0.b1 b2 ... bn`.
pub fn dyadic_value<T: Scalar>(bits: &BitString) -> T {
    let half = T::one() / two::<T>();
    let mut value = T::zero();
    let mut weight = half.clone();
    for &b in bits.bits() {
        if b {
            value = value + weight.clone();
        }
        weight = weight * half.clone();
    }
    value
}

/// Shortest bit string `b` with `0.b` in `[lo, hi)`; the smallest such value
/// when several of that length qualify.
pub fn shortest_binary_in_interval<T: Scalar>(interval: &IdealInterval<T>) -> BitString {
    let two = two::<T>();
    let half = T::one() / two.clone();
    let mut lo = interval.lo.clone();
    let mut hi = interval.hi.clone();
    let mut out = BitString::new();
    // The width doubles every iteration, so this terminates.
    loop {
        if lo <= T::zero() {
            return out;
        }
        if lo <= half && half < hi {
            out.push(true);
            return out;
        }
        if hi <= half {
            out.push(false);
            lo = lo * two.clone();
            hi = hi * two.clone();
        } else {
            out.push(true);
            lo = lo * two.clone() - T::one();
            hi = hi * two.clone() - T::one();
        }
    }
}
