//! Domain types, validation, capacity evaluation, and instance generation.
//!
//! An [`Instance`] is the whole problem: `N` channels, each with an
//! availability probability `q_n` and a noise variance `sigma_n^2`, a power
//! budget `P`, and a sensing budget `L`. A [`SensingSet`] picks which
//! channels get sensed and an [`Allocation`] records the water level and the
//! per-channel powers. Ergodic capacity is
//! `sum_{n in S} (q_n / 2) ln(1 + P_n / sigma_n^2)` in nats.
//!
//! `q_n` is the probability the channel is *available* (unoccupied): it is
//! the weight on both the rate and the spent power, so a channel that is
//! almost never free contributes almost nothing to either.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::math;
use crate::rng::SplitMix64;
use crate::Error;

/// Noise variances from fading deeper than this are clamped.
pub const NOISE_VAR_MIN: f64 = 1e-6;
/// Upper clamp for noise variances from deep fades.
pub const NOISE_VAR_MAX: f64 = 1e6;

/// One channel's statistics: availability probability and noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelProfile {
    /// Probability the channel is unoccupied in a slot, in `[0, 1]`.
    pub avail_prob: f64,
    /// Noise variance (power units), positive and finite.
    pub noise_var: f64,
}

impl ChannelProfile {
    pub fn new(avail_prob: f64, noise_var: f64) -> Self {
        Self { avail_prob, noise_var }
    }
}

/// The full selection-and-allocation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// Channel statistics, indexed `0..N`.
    pub channels: Vec<ChannelProfile>,
    /// Average transmit power budget `P > 0`.
    pub power_budget: f64,
    /// Maximum number of channels that can be sensed per slot, `1..=N`.
    pub sensing_budget: usize,
}

impl Instance {
    pub fn new(channels: Vec<ChannelProfile>, power_budget: f64, sensing_budget: usize) -> Self {
        Self { channels, power_budget, sensing_budget }
    }

    /// Number of channels `N`.
    pub fn n(&self) -> usize {
        self.channels.len()
    }

    /// Check every type invariant; reports the first violation.
    pub fn validate(&self) -> Result<(), Error> {
        if self.channels.is_empty() {
            return Err(Error::NoChannels);
        }
        for (i, ch) in self.channels.iter().enumerate() {
            if !(ch.avail_prob >= 0.0 && ch.avail_prob <= 1.0) {
                return Err(Error::AvailProbOutOfRange { channel: i, value: ch.avail_prob });
            }
            if !(ch.noise_var > 0.0 && ch.noise_var.is_finite()) {
                return Err(Error::NoiseVarNotPositive { channel: i, value: ch.noise_var });
            }
        }
        if !(self.power_budget > 0.0 && self.power_budget.is_finite()) {
            return Err(Error::PowerBudgetNotPositive { value: self.power_budget });
        }
        if self.sensing_budget == 0 || self.sensing_budget > self.n() {
            return Err(Error::SensingBudgetOutOfRange {
                budget: self.sensing_budget,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// Validate an instance; `Ok` iff all type invariants hold.
pub fn validate_instance(inst: &Instance) -> Result<(), Error> {
    inst.validate()
}

/// A set of channel indices selected for sensing.
///
/// Stored sorted and deduplicated, so equality, ordering (lexicographic on
/// the sorted indices), and subset tests are cheap and deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SensingSet(Vec<usize>);

impl SensingSet {
    /// Build from any iterator of indices; sorts and deduplicates.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    /// Indices in ascending order.
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> core::iter::Copied<core::slice::Iter<'_, usize>> {
        self.0.iter().copied()
    }

    pub fn is_subset_of(&self, other: &SensingSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Largest index, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Hex bitmask with channel `n` on bit `n`, e.g. `{1, 2}` → `"0x6"`.
    pub fn bitmask_hex(&self) -> String {
        let limb_count = match self.max_index() {
            Some(m) => m / 64 + 1,
            None => return String::from("0x0"),
        };
        let mut limbs = vec![0u64; limb_count];
        for i in self.iter() {
            limbs[i / 64] |= 1u64 << (i % 64);
        }
        let mut out = String::from("0x");
        let mut rest = limbs.iter().rev();
        // Top limb without leading zeros, lower limbs zero-padded.
        let top = rest.next().copied().unwrap_or(0);
        let _ = write!(out, "{top:x}");
        for limb in rest {
            let _ = write!(out, "{limb:016x}");
        }
        out
    }
}

impl FromIterator<usize> for SensingSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_indices(iter)
    }
}

/// Water level, per-channel powers, and the resulting ergodic capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Common value of `P_n + sigma_n^2` across channels with positive power.
    pub water_level: f64,
    /// Power per channel, length `N`; zero outside the sensing set.
    pub powers: Vec<f64>,
    /// Ergodic capacity in nats.
    pub capacity_nats: f64,
}

/// Capacity in nats of raw per-channel powers over a sensing set.
///
/// `sum_{n in sensing} (q_n / 2) ln(1 + powers[n] / sigma_n^2)`; channels
/// outside the set are ignored.
pub fn capacity_of_powers(inst: &Instance, sensing: &SensingSet, powers: &[f64]) -> f64 {
    let mut total = 0.0;
    for n in sensing.iter() {
        let ch = &inst.channels[n];
        if ch.avail_prob > 0.0 && powers[n] > 0.0 {
            total += 0.5 * ch.avail_prob * math::ln_1p(powers[n] / ch.noise_var);
        }
    }
    total
}

/// Capacity in nats of an allocation over a sensing set.
pub fn capacity(inst: &Instance, sensing: &SensingSet, alloc: &Allocation) -> f64 {
    capacity_of_powers(inst, sensing, &alloc.powers)
}

/// Generate a random instance: `q_n` i.i.d. uniform on `[0, 1]` and noise
/// variances from a `taps`-tap frequency-selective fading draw.
///
/// The impulse response has i.i.d. standard complex Gaussian taps; its
/// `n`-point DFT `H_k` is normalized to unit mean `|H_k|^2` and the noise
/// variance is `1 / |H_k|^2`, clamped to `[1e-6, 1e6]`. The power budget is
/// `n * 10^(snr_db / 10)`, so `snr_db` is the per-channel average SNR at
/// unit mean noise. Deterministic in `seed`.
pub fn generate_instance(
    seed: u64,
    n: usize,
    l: usize,
    snr_db: f64,
    taps: usize,
) -> Result<Instance, Error> {
    if n == 0 {
        return Err(Error::NoChannels);
    }
    if l == 0 || l > n {
        return Err(Error::SensingBudgetOutOfRange { budget: l, n });
    }
    if taps == 0 {
        return Err(Error::TapsNotPositive);
    }

    let mut rng = SplitMix64::new(seed);

    let avail: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();

    let impulse: Vec<(f64, f64)> = (0..taps).map(|_| rng.next_complex_gaussian()).collect();

    // |H_k|^2 for the n-point DFT of the (zero-padded) impulse response.
    let mut gain = Vec::with_capacity(n);
    for k in 0..n {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, &(hre, him)) in impulse.iter().enumerate() {
            let angle = -2.0 * core::f64::consts::PI * (k as f64) * (m as f64) / (n as f64);
            let (c, s) = (math::cos(angle), math::sin(angle));
            re += hre * c - him * s;
            im += hre * s + him * c;
        }
        gain.push(re * re + im * im);
    }
    let mean_gain = gain.iter().sum::<f64>() / n as f64;

    let channels = avail
        .iter()
        .zip(&gain)
        .map(|(&q, &g)| {
            let noise = (mean_gain / g).clamp(NOISE_VAR_MIN, NOISE_VAR_MAX);
            ChannelProfile::new(q, noise)
        })
        .collect();

    let inst = Instance::new(channels, n as f64 * math::powf(10.0, snr_db / 10.0), l);
    // Catches non-finite budgets from extreme snr_db values.
    inst.validate()?;
    Ok(inst)
}
