/// Increment of the SplitMix64 sequence (2^64 / golden ratio).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. Bijective on `u64`, used to spread seeds.
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Marsaglia xorshift with Vigna's multiplicative output scrambler
/// (xorshift64*, shifts 12/25/27).
///
/// The generator is spelled out here so that a seed produces the same stream
/// on every platform and in every port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        let state = splitmix64(seed);
        // zero is the one fixed point of the xorshift step
        Xorshift64Star { state: if state == 0 { GOLDEN_GAMMA } else { state } }
    }

    /// Independent stream for calibration trial `index`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        Xorshift64Star::new(seed ^ splitmix64(index))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
