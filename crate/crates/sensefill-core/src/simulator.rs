//! Seeded Monte Carlo validation of the ergodic capacity model.
//!
//! Occupancy is drawn i.i.d. Bernoulli per slot and per sensed channel. The
//! transmit policy is static: the sensing set and per-channel powers are
//! fixed up front, and in each slot a sensed channel carries its assigned
//! power exactly when it turns out to be free. The per-slot rate therefore
//! has mean equal to the analytical ergodic capacity, and the per-slot
//! width-weighted power has mean within the budget.

use alloc::vec::Vec;

use crate::math;
use crate::model::{Allocation, Instance, SensingSet};
use crate::rng::SplitMix64;
use crate::Error;

/// Per-slot averages from a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Mean per-slot rate in nats.
    pub empirical_rate: f64,
    /// Standard error of the per-slot rate (infinite for a single slot).
    pub rate_stderr: f64,
    /// Mean per-slot transmitted power.
    pub empirical_avg_power: f64,
    /// Standard error of the per-slot power (infinite for a single slot).
    pub power_stderr: f64,
    /// Number of slots simulated.
    pub slots: u64,
}

/// Simulate `slots` time slots of Bernoulli availability and accumulate the
/// realized rate and power of the given static allocation.
///
/// Per slot, each sensed channel `n` independently turns out free with
/// probability `q_n`; if free it carries power `P_n` and rate
/// `(1/2) ln(1 + P_n / sigma_n^2)`. Draws happen in ascending channel order
/// within each slot, one per sensed channel, so results are a pure function
/// of the seed. Requires the allocation to be consistent with the sensing
/// set (zero power off-set) and `slots >= 1`.
pub fn simulate(
    inst: &Instance,
    sensing: &SensingSet,
    alloc: &Allocation,
    slots: u64,
    seed: u64,
) -> Result<SimResult, Error> {
    if alloc.powers.len() != inst.n() {
        return Err(Error::AllocationMismatch { channel: alloc.powers.len() });
    }
    for n in 0..inst.n() {
        if !sensing.contains(n) && alloc.powers[n] != 0.0 {
            return Err(Error::AllocationMismatch { channel: n });
        }
    }
    if let Some(max) = sensing.max_index() {
        if max >= inst.n() {
            return Err(Error::IndexOutOfRange { index: max, n: inst.n() });
        }
    }
    assert!(slots >= 1, "simulate needs at least one slot");

    // Per sensed channel: availability, assigned power, rate when free.
    let lanes: Vec<(f64, f64, f64)> = sensing
        .iter()
        .map(|n| {
            let ch = &inst.channels[n];
            let power = alloc.powers[n];
            (ch.avail_prob, power, 0.5 * math::ln_1p(power / ch.noise_var))
        })
        .collect();

    let mut rng = SplitMix64::new(seed);
    let mut rate_acc = Welford::new();
    let mut power_acc = Welford::new();

    for _ in 0..slots {
        let mut rate = 0.0;
        let mut power = 0.0;
        for &(q, p, r) in &lanes {
            if rng.next_bernoulli(q) {
                rate += r;
                power += p;
            }
        }
        rate_acc.push(rate);
        power_acc.push(power);
    }

    Ok(SimResult {
        empirical_rate: rate_acc.mean,
        rate_stderr: rate_acc.stderr(),
        empirical_avg_power: power_acc.mean,
        power_stderr: power_acc.stderr(),
        slots,
    })
}

/// Welford's running mean and variance. A constant stream comes out with
/// its mean bit-exact and a standard error of exactly zero, which is what
/// the degenerate all-`q_n = 1` case promises.
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn new() -> Self {
        Self { count: 0, mean: 0.0, m2: 0.0 }
    }

    #[inline]
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Standard error of the mean; infinite below two samples.
    fn stderr(&self) -> f64 {
        if self.count < 2 {
            return f64::INFINITY;
        }
        let var = (self.m2 / (self.count - 1) as f64).max(0.0);
        math::sqrt(var / self.count as f64)
    }
}
