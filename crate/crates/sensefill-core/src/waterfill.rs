//! Exact modified water-filling over a fixed sensing set.
//!
//! Classic water-filling gives every channel unit width; here channel `n`
//! occupies width `q_n`, because power spent on a channel is only drawn from
//! the budget in the fraction of slots where the channel is actually free.
//! The water level `lambda` solves
//!
//! ```text
//! sum_{n in S} q_n * max(lambda - sigma_n^2, 0) = P
//! ```
//!
//! The left side is piecewise linear and nondecreasing in `lambda` with
//! breakpoints at the noise variances, so the exact solution falls out of a
//! single sorted sweep; no iterative tolerance is involved. The oracle calls
//! this thousands of times per instance, which is why the exact method
//! matters.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{capacity_of_powers, Allocation, Instance, SensingSet};
use crate::Error;

/// Water-fill the power budget over `sensing`, returning the unique level
/// `lambda` and powers `P_n = max(lambda - sigma_n^2, 0)` on the set.
///
/// Channels in the set with `q_n = 0` still receive the formal power
/// `max(lambda - sigma_n^2, 0)` but contribute nothing to the budget or the
/// capacity. Errors on an empty set, on indices past `N`, and on a set whose
/// total width `sum q_n` is zero (no water level can absorb `P`).
pub fn solve_waterfill(inst: &Instance, sensing: &SensingSet) -> Result<Allocation, Error> {
    if sensing.is_empty() {
        return Err(Error::EmptySensingSet);
    }
    if let Some(max) = sensing.max_index() {
        if max >= inst.n() {
            return Err(Error::IndexOutOfRange { index: max, n: inst.n() });
        }
    }

    // Selected (noise_var, width) pairs sorted by noise ascending.
    let mut bands: Vec<(f64, f64)> = sensing
        .iter()
        .map(|n| (inst.channels[n].noise_var, inst.channels[n].avail_prob))
        .collect();
    bands.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let level = fill_level(&bands, inst.power_budget)?;

    let mut powers = vec![0.0; inst.n()];
    for n in sensing.iter() {
        powers[n] = (level - inst.channels[n].noise_var).max(0.0);
    }
    let capacity_nats = capacity_of_powers(inst, sensing, &powers);
    Ok(Allocation { water_level: level, powers, capacity_nats })
}

/// Breakpoint sweep on `(noise_var, width)` bands sorted by noise ascending.
fn fill_level(bands: &[(f64, f64)], budget: f64) -> Result<f64, Error> {
    let mut width_sum = 0.0;
    let mut weighted_noise_sum = 0.0;
    let mut level = None;
    for (i, &(noise, width)) in bands.iter().enumerate() {
        width_sum += width;
        weighted_noise_sum += width * noise;
        if width_sum <= 0.0 {
            continue;
        }
        let candidate = (budget + weighted_noise_sum) / width_sum;
        // Valid when the level sits inside this breakpoint interval: at or
        // above every noise floor filled so far, below the next one.
        let next_break = bands.get(i + 1).map(|b| b.0);
        if candidate >= noise && next_break.is_none_or(|b| candidate <= b) {
            level = Some(candidate);
            break;
        }
    }
    level.ok_or(Error::ZeroTotalWidth)
}
