/// xorshift64* generator. Fixed here rather than borrowed from a crate
/// because initial weights are part of the artifact format: the stream for
/// a seed must never change.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mixed = seed ^ 0x9E37_79B9_7F4A_7C15;
        Self {
            state: if mixed == 0 {
                0x2545_F491_4F6C_DD1D
            } else {
                mixed
            },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    /// Uniform in `0..bound` (multiply-shift; the bias is below 2^-32).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0 && bound <= u32::MAX as u64 + 1);
        (self.next_u32() as u64 * bound) >> 32
    }

    /// Uniform in `[-amplitude, amplitude)`.
    pub fn symmetric(&mut self, amplitude: i32) -> i32 {
        let span = 2 * amplitude as i64;
        ((self.next_u32() as i64 * span) >> 32) as i32 - amplitude
    }
}
