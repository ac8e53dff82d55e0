//! SplitMix64: the fixed pseudo-random generator behind every seeded
//! generator and batch in this crate, so instances are reproducible across
//! platforms and releases.
//!
//! State update adds the golden-gamma constant `0x9E3779B97F4A7C15`; output
//! mixing multiplies by `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` with
//! xor-shifts of 30, 27, and 31 bits (Steele, Lea & Flood's SplitMix64).

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..bound` by modulo reduction (the bias is
    /// negligible for the desk-scale bounds used here).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Inclusive range.
    pub fn next_in(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        lo + self.next_below(hi - lo + 1)
    }
}
