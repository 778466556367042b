//! Joint-complexity bound on the toy machine.
//!
//! For each pair `(x, y)` the estimate of the pair's complexity is set
//! against `phi(y) + phi(x|y)` plus a self-delimiting description of the
//! first term's length. A family-wide bound on the gap is the additive
//! constant of the inequality, as far as this machine can exhibit it.

use rayon::prelude::*;
use serde::Serialize;

use super::codes::pair_encode;
use super::phi::phi;
use crate::bits::BitString;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointReport {
    pub x: String,
    pub y: String,
    pub t: u64,
    /// `phi(t, <x,y>, e)`.
    pub joint_bits: usize,
    /// `phi(t, y, e)`.
    pub y_bits: usize,
    /// `phi(t, x, y)`.
    pub x_given_y_bits: usize,
    /// `2 * l(binary numeral of y_bits)`.
    pub length_code_bits: usize,
    pub bound_bits: usize,
    pub gap: i64,
}

pub fn joint_bound_report(x: &BitString, y: &BitString, t: u64) -> Result<JointReport> {
    let joint_bits = phi(t, &pair_encode(x, y), &BitString::new())?.value_bits;
    let y_bits = phi(t, y, &BitString::new())?.value_bits;
    let x_given_y_bits = phi(t, x, y)?.value_bits;
    let length_code_bits = 2 * BitString::binary_numeral(y_bits as u64).len();
    let bound_bits = y_bits + x_given_y_bits + length_code_bits;
    Ok(JointReport {
        x: x.to_string(),
        y: y.to_string(),
        t,
        joint_bits,
        y_bits,
        x_given_y_bits,
        length_code_bits,
        bound_bits,
        gap: joint_bits as i64 - bound_bits as i64,
    })
}

/// Summary of the gap over every pair with both lengths at most `max_len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyGap {
    pub max_len: usize,
    pub t: u64,
    pub pairs: usize,
    pub max_gap: i64,
    pub min_gap: i64,
    /// First pair in enumeration order attaining `max_gap`.
    pub argmax: (String, String),
}

pub fn family_gap(max_len: usize, t: u64) -> Result<FamilyGap> {
    let strings: Vec<BitString> = BitString::all_up_to(max_len).collect();
    let pairs: Vec<(&BitString, &BitString)> = strings
        .iter()
        .flat_map(|x| strings.iter().map(move |y| (x, y)))
        .collect();
    let reports = pairs
        .par_iter()
        .map(|&(x, y)| joint_bound_report(x, y, t))
        .collect::<Result<Vec<_>>>()?;
    let mut best = &reports[0];
    for r in &reports {
        if r.gap > best.gap {
            best = r;
        }
    }
    Ok(FamilyGap {
        max_len,
        t,
        pairs: reports.len(),
        max_gap: best.gap,
        min_gap: reports.iter().map(|r| r.gap).min().unwrap_or(0),
        argmax: (best.x.clone(), best.y.clone()),
    })
}
