//! Byte-oriented range coder.
//!
//! `low` is 64 bits wide so a carry out of the 32-bit window lands in bit 32
//! and is folded into the delayed byte run (`cache` plus `pending` 0xFF
//! bytes). Interval subdivision multiplies before dividing, so each slot gets
//! `floor(range * end / 2^16) - floor(range * start / 2^16)` units.

use super::table::{CumulativeTable, PROB_BITS, PROB_SCALE};
use crate::error::{Error, Result};

const TOP: u32 = 1 << 24;
/// Bytes emitted by [`Encoder::finish`] and read by [`Decoder::new`] up front.
pub const FLUSH_BYTES: usize = 5;

#[derive(Debug, Clone)]
pub struct Encoder {
    low: u64,
    range: u32,
    cache: u8,
    pending: u64,
    out: Vec<u8>,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Self {
            low: 0,
            range: u32::MAX,
            cache: 0,
            pending: 1,
            out: Vec::new(),
        }
    }

    pub fn range(&self) -> u32 {
        self.range
    }

    /// Bytes already committed to the output.
    pub fn emitted(&self) -> &[u8] {
        &self.out
    }

    pub fn encode(&mut self, table: &CumulativeTable, sym: usize) {
        let r = self.range as u64;
        let lo = (r * table.start(sym) as u64) >> PROB_BITS;
        let hi = (r * table.end(sym) as u64) >> PROB_BITS;
        self.low += lo;
        self.range = (hi - lo) as u32;
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    fn shift_low(&mut self) {
        if (self.low as u32) < 0xFF00_0000 || (self.low >> 32) != 0 {
            let carry = (self.low >> 32) as u8;
            let mut byte = self.cache;
            loop {
                self.out.push(byte.wrapping_add(carry));
                byte = 0xFF;
                self.pending -= 1;
                if self.pending == 0 {
                    break;
                }
            }
            self.cache = (self.low >> 24) as u8;
        }
        self.pending += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    /// Flushes the registers. Output length is always
    /// `renormalizations + FLUSH_BYTES`.
    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..FLUSH_BYTES {
            self.shift_low();
        }
        self.out
    }
}

/// Mirror of [`Encoder`]. `code` is the offset of the read window from the
/// encoder's `low`, so the decoder never needs `low` itself.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    data: &'a [u8],
    cursor: usize,
    range: u32,
    code: u32,
}

impl<'a> Decoder<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self> {
        if data.len() < FLUSH_BYTES {
            return Err(Error::TruncatedStream(data.len()));
        }
        // Byte 0 is the integer part of the code value and is always zero.
        if data[0] != 0 {
            return Err(Error::Format(
                "payload does not start with a zero byte".into(),
            ));
        }
        let code = u32::from_be_bytes([data[1], data[2], data[3], data[4]]);
        Ok(Self {
            data,
            cursor: FLUSH_BYTES,
            range: u32::MAX,
            code,
        })
    }

    pub fn range(&self) -> u32 {
        self.range
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// True once every payload byte has been pulled into the window.
    pub fn is_exhausted(&self) -> bool {
        self.cursor == self.data.len()
    }

    /// Decodes one symbol. A table different from the one used to encode is
    /// accepted and simply yields garbage symbols.
    pub fn decode(&mut self, table: &CumulativeTable) -> Result<usize> {
        let r = self.range as u64;
        let v = self.code as u64;
        let target = ((((v + 1) << PROB_BITS) - 1) / r).min(PROB_SCALE as u64 - 1) as u32;
        let sym = table.symbol_for(target);
        let lo = (r * table.start(sym) as u64) >> PROB_BITS;
        let hi = (r * table.end(sym) as u64) >> PROB_BITS;
        self.code = self.code.wrapping_sub(lo as u32);
        self.range = (hi - lo) as u32;
        while self.range < TOP {
            self.range <<= 8;
            self.code = (self.code << 8) | self.next_byte()? as u32;
        }
        Ok(sym)
    }

    fn next_byte(&mut self) -> Result<u8> {
        let b = *self
            .data
            .get(self.cursor)
            .ok_or(Error::TruncatedStream(self.data.len()))?;
        self.cursor += 1;
        Ok(b)
    }
}

/// Encodes a whole symbol sequence with one table per step.
pub fn encode_all<'t>(steps: impl IntoIterator<Item = (&'t CumulativeTable, usize)>) -> Vec<u8> {
    let mut enc = Encoder::new();
    for (table, sym) in steps {
        enc.encode(table, sym);
    }
    enc.finish()
}
