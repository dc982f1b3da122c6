//! Deterministic seeded RNG for instance generation and Monte Carlo runs.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood; the reference stream
//! used by `java.util.SplittableRandom` and Vigna's `splitmix64.c`): the
//! state advances by the 64-bit golden-gamma constant and the output is a
//! two-round xor-shift-multiply mix. The identity is documented so that
//! golden fixtures stay bit-identical on every platform and toolchain; it is
//! not cryptographically secure.

/// SplitMix64 stream seeded from a plain `u64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next raw 64-bit output.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform draw in `(0, 1]`, safe to pass through a logarithm.
    #[inline]
    pub fn next_open_f64(&mut self) -> f64 {
        1.0 - self.next_f64()
    }

    /// One standard complex Gaussian sample `CN(0, 1)` as `(re, im)`.
    ///
    /// Polar form from two uniforms: modulus² is Exp(1), phase is uniform,
    /// so `E[re² + im²] = 1`. Consumes exactly two `next_u64` outputs.
    #[inline]
    pub fn next_complex_gaussian(&mut self) -> (f64, f64) {
        let radius = crate::math::sqrt(-crate::math::ln(self.next_open_f64()));
        let phase = 2.0 * core::f64::consts::PI * self.next_f64();
        (radius * crate::math::cos(phase), radius * crate::math::sin(phase))
    }

    /// Bernoulli draw with success probability `p`; `p >= 1` is always true
    /// and `p <= 0` always false. Consumes one `next_u64` output.
    #[inline]
    pub fn next_bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}
