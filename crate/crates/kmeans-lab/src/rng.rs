//! Deterministic random number generation.
//!
//! Everything random in this crate flows through [`SplitMix64`], a
//! counter-based 64-bit generator: the state advances by a fixed odd
//! constant and each output is a bijective finalizer of the state.
//! Equal seeds therefore give bit-identical streams on every platform
//! and under any thread schedule, as long as streams are never shared
//! between workers. Independent streams are obtained with
//! [`derive_seed`], never by splitting one stream.
//!
//! Gaussian variates use the Marsaglia polar method: each round draws a
//! pair and the spare is cached, so a stream's consumption depends only
//! on its own draws.

/// Fixed-point golden ratio increment used by the SplitMix64 state walk.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer (Stafford mix 13). Bijective on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a list of
/// key parts (cell coordinates, trial indices, purpose tags).
///
/// The chain is `s_0 = mix64(master) + GAMMA`,
/// `s_{k+1} = mix64(s_k + mix64(part_k))` with wrapping addition. Mixing
/// each part first keeps nearby integers (trial 0, 1, 2, ...) from
/// producing correlated seeds; the additive combiner has no cancellation
/// when a part happens to equal the master seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut s = mix64(master).wrapping_add(GOLDEN_GAMMA);
    for &p in parts {
        s = mix64(s.wrapping_add(mix64(p)));
    }
    s
}

/// Counter-based pseudorandom generator (SplitMix64) with a cached
/// Gaussian spare.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    gauss_spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 {
            state: seed,
            gauss_spare: None,
        }
    }

    /// Next raw 64-bit output.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `0..bound` by rejection (no modulo bias).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }

    /// Standard normal draw via the Marsaglia polar method.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.gauss_spare.take() {
            return g;
        }
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.gauss_spare = Some(v * m);
                return u * m;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
