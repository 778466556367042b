//! Fixed-point helpers for the neural predictor.
//!
//! Values are `i32` with 16 fractional bits. Every division is Rust integer
//! division, which truncates toward zero, so results are identical on every
//! target.

use std::sync::OnceLock;

pub const FRAC_BITS: u32 = 16;
pub const ONE: i32 = 1 << FRAC_BITS;

/// `exp(-d)` is tabulated for `d < EXP_CUTOFF_NATS`; beyond it the weight is 0.
pub const EXP_CUTOFF_NATS: usize = 24;
/// Scale of the values returned by [`exp_neg`]: `exp_neg(0) == 1 << 32`.
pub const EXP_SCALE_BITS: u32 = 32;

const HI_STEPS_PER_NAT: usize = 256;
const HI_LEN: usize = EXP_CUTOFF_NATS * HI_STEPS_PER_NAT;
const LO_LEN: usize = 256;
// round(exp(-1/256) * 2^63) and round(exp(-1/65536) * 2^63).
const STEP_HI_Q63: u128 = 0x7f80_3fea_affe_ef1c;
const STEP_LO_Q63: u128 = 0x7fff_8000_3fff_eaab;

/// Both tables hold Q1.63 values.
struct ExpTables {
    hi: Vec<u64>,
    lo: Vec<u64>,
}

fn geometric_table(step_q63: u128, len: usize) -> Vec<u64> {
    let mut acc: u128 = 1 << 63;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(acc as u64);
        acc = (acc * step_q63) >> 63;
    }
    out
}

fn tables() -> &'static ExpTables {
    static TABLES: OnceLock<ExpTables> = OnceLock::new();
    TABLES.get_or_init(|| ExpTables {
        hi: geometric_table(STEP_HI_Q63, HI_LEN),
        lo: geometric_table(STEP_LO_Q63, LO_LEN),
    })
}

/// `exp(-d)` for a nonnegative Q16.16 argument, at full 2^-16 input
/// granularity: the high part indexes a 1/256-nat table, the low 8 bits a
/// 1/65536-nat table, and the two entries are multiplied.
pub fn exp_neg(d: i64) -> u64 {
    debug_assert!(d >= 0);
    let hi = (d >> 8) as usize;
    if hi >= HI_LEN {
        return 0;
    }
    let t = tables();
    ((t.hi[hi] as u128 * t.lo[(d & 0xFF) as usize] as u128) >> (126 - EXP_SCALE_BITS)) as u64
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = x.div_ceil(2);
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

pub fn to_f64(v: i64, frac_bits: u32) -> f64 {
    v as f64 / (1u64 << frac_bits) as f64
}
