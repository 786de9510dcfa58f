//! splitmix64 streams.
//!
//! The generator is the standard splitmix64: the state advances by
//! `0x9E3779B97F4A7C15` and each output is the finaliser of the new state.
//! Output `i` of the stream seeded with `s` is therefore `mix(s + (i+1)*GAMMA)`,
//! which lets any (seed, index) draw be computed directly.

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Output `index` of the splitmix64 stream seeded with `seed`.
pub fn splitmix_at(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent sub-stream: seeded with output `key` of the parent stream.
    pub fn keyed(seed: u64, key: u64) -> Self {
        SplitMix64::new(splitmix_at(seed, key))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }
}

impl Iterator for SplitMix64 {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        Some(self.next_u64())
    }
}
