//! Deterministic 64-bit generator used for workloads and randomized tests.

/// SplitMix64: a fixed mixing generator, so identical seeds reproduce
/// identical streams on every platform.
///
/// The update and mixing constants are the standard ones
/// (Steele, Lea, Flood; as in `java.util.SplittableRandom`):
/// state advances by `0x9E37_79B9_7F4A_7C15` and the output is the
/// `xorshift*`-style finalizer with multipliers `0xBF58_476D_1CE4_E5B9`
/// and `0x94D0_49BB_1331_11EB`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..bound` by reduction. The modulo bias is
    /// irrelevant for workload generation and keeps the stream portable.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Value in the inclusive range `lo..=hi`.
    pub fn next_range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next_below(hi - lo + 1)
    }
}
