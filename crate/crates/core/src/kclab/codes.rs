//! Self-delimiting codes for bit strings.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// `1^l(s) 0 s`.
pub fn prefix_encode(s: &BitString) -> BitString {
    let mut out = BitString::from_bits(vec![true; s.len()]);
    out.push(false);
    out.extend_from(s);
    out
}

/// Splits `bits` into the prefix-coded string at its head and the rest.
pub fn prefix_decode(bits: &BitString) -> Result<(BitString, BitString)> {
    let b = bits.bits();
    let n = b
        .iter()
        .position(|&bit| !bit)
        .ok_or_else(|| Error::InvalidBits("prefix code has no terminating 0".into()))?;
    let end = 2 * n + 1;
    if b.len() < end {
        return Err(Error::InvalidBits(format!(
            "prefix code announces {n} bits but only {} follow",
            b.len() - n - 1
        )));
    }
    Ok((bits.slice(n + 1, end), bits.slice(end, b.len())))
}

/// `<x, y> = prefix_encode(x) y`.
pub fn pair_encode(x: &BitString, y: &BitString) -> BitString {
    let mut out = prefix_encode(x);
    out.extend_from(y);
    out
}

pub fn pair_decode(bits: &BitString) -> Result<(BitString, BitString)> {
    prefix_decode(bits)
}
