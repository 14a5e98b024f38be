//! Deterministic pseudorandom numbers.
//!
//! Sampling must reproduce bit-for-bit across platforms and across
//! reimplementations in other languages, so instead of a general-purpose RNG
//! crate this module pins one small, published algorithm: **SplitMix64**
//! (Steele, Lea & Flood, "Fast splittable pseudorandom number generators",
//! OOPSLA 2014; also distributed as `splitmix64.c` by Vigna). The state is a
//! single 64-bit counter advanced by the golden-gamma constant; each output
//! is a finalizer applied to the counter, so the k-th draw from a seed is a
//! pure function of (seed, k).
//!
//! The fixed constants below are the canonical ones and a golden-output test
//! keeps them honest.

/// SplitMix64 generator state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX2: u64 = 0x94D0_49BB_1331_11EB;

impl SplitMix64 {
    /// Seed the generator. Equal seeds produce equal streams everywhere.
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Next 64 uniformly distributed bits.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(MIX1);
        z = (z ^ (z >> 27)).wrapping_mul(MIX2);
        z ^ (z >> 31)
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate (Box-Muller; discards the second value).
    pub fn next_gaussian(&mut self) -> f64 {
        // u must be strictly positive for the logarithm.
        let u = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }
}
