//! Two-stage joint selection of sensing channels and power allocation.
//!
//! The coarse stage iterates between water-filling a candidate set and
//! re-picking the `L` channels with the largest width-weighted surplus
//! `q_n (lambda - sigma_n^2)`, driving toward the lowest reachable water
//! level. A sufficient optimality certificate then checks whether every
//! unselected channel's noise floor already sits above that level; when it
//! does, no swap can help and the coarse set is exactly optimal.
//!
//! When the certificate does not fire, the fine stage restricts attention to
//! the candidate channels with `sigma_n^2 <= min_water_level` and iterates
//! with the closed-form untruncated level
//! `lambda = (sum q_n sigma_n^2 + P) / sum q_n` and the inclusion score
//! `lambda - sigma_n^2 e^(1 - sigma_n^2 / lambda)`, whose sign is the KKT
//! admissibility condition for membership in the optimal set.
//!
//! Both loops terminate at a set fixed point; a revisited set (cycle) stops
//! the loop and returns the best-capacity iterate seen.

use alloc::vec::Vec;

use crate::model::{Allocation, Instance, SensingSet};
use crate::waterfill::solve_waterfill;
use crate::{math, Error};

/// Which solver produced an [`OptResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Coarse,
    Fine,
    Exhaustive,
}

impl Method {
    /// Stable lowercase name, used in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Method::Coarse => "coarse",
            Method::Fine => "fine",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// One accepted loop iteration: the level computed on the previous set and
/// the set selected from it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub water_level: f64,
    pub selected: SensingSet,
}

/// Outcome of a selection method.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub method: Method,
    pub sensing: SensingSet,
    /// Always the water-filling allocation of `sensing` (re-derivable).
    pub alloc: Allocation,
    /// Per-iteration record of the selection loop; empty for the oracle.
    pub trace: Vec<TraceStep>,
    /// True only when the sufficient optimality certificate verifiably holds.
    pub certified_optimal: bool,
    /// Lowest water level found by the coarse stage (carried into fine).
    pub min_water_level: f64,
}

impl OptResult {
    /// Number of water-fill/re-select loops executed.
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

/// Relative tolerance when comparing noise floors against the water level in
/// the optimality certificate.
const CERTIFICATE_REL_TOL: f64 = 1e-12;

fn certificate_holds(inst: &Instance, sensing: &SensingSet, min_water_level: f64) -> bool {
    let slack = CERTIFICATE_REL_TOL * min_water_level;
    (0..inst.n())
        .filter(|&n| !sensing.contains(n))
        .all(|n| inst.channels[n].noise_var >= min_water_level - slack)
}

/// Sufficient optimality certificate for a coarse result: every channel left
/// out of the set has a noise floor at or above the lowest water level, so
/// water-filling any superset would give those channels zero power and no
/// exchange can raise capacity.
pub fn certify_optimal(inst: &Instance, coarse: &OptResult) -> bool {
    certificate_holds(inst, &coarse.sensing, coarse.min_water_level)
}

/// Select up to `limit` indices with strictly positive score, largest score
/// first, ties broken by lowest index.
fn top_positive(scores: &[(usize, f64)], limit: usize) -> SensingSet {
    let mut positive: Vec<(usize, f64)> =
        scores.iter().copied().filter(|&(_, s)| s > 0.0).collect();
    positive.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    positive.truncate(limit);
    SensingSet::from_indices(positive.into_iter().map(|(i, _)| i))
}

/// Shared fixed-point loop: from `initial`, repeatedly derive a level from
/// the current set and re-select, until the set repeats.
///
/// `level_of` produces the iteration's water level (it gets the set's
/// water-filling allocation, which the coarse stage's level simply reads);
/// `select` maps that level to the next set. Returns
/// `(final set, its allocation, level, trace)`.
fn fixed_point_loop(
    inst: &Instance,
    initial: SensingSet,
    mut level_of: impl FnMut(&SensingSet, &Allocation) -> Result<f64, Error>,
    mut select: impl FnMut(f64) -> SensingSet,
) -> Result<(SensingSet, Allocation, f64, Vec<TraceStep>), Error> {
    // (set, alloc, level at which it was filled) for every set seen.
    let mut history: Vec<(SensingSet, Allocation, f64)> = Vec::new();
    let mut trace = Vec::new();
    let mut current = initial;

    loop {
        let alloc = solve_waterfill(inst, &current)?;
        let level = level_of(&current, &alloc)?;
        history.push((current.clone(), alloc, level));

        let next = select(level);
        trace.push(TraceStep { water_level: level, selected: next.clone() });

        if next == current {
            let (set, alloc, level) = history.pop().expect("just pushed");
            return Ok((set, alloc, level, trace));
        }
        if history.iter().any(|(s, _, _)| *s == next) {
            // Cycle: keep the best-capacity iterate seen (first seen wins ties).
            let best = history
                .iter()
                .enumerate()
                .max_by(|(ia, (_, a, _)), (ib, (_, b, _))| {
                    a.capacity_nats.total_cmp(&b.capacity_nats).then(ib.cmp(ia))
                })
                .expect("history nonempty");
            let (set, alloc, level) = best.1.clone();
            return Ok((set, alloc, level, trace));
        }
        current = next;
    }
}

/// Coarse stage: fixed-point iteration toward the lowest water level.
///
/// Starts from the `L` channels with the largest availability, water-fills,
/// then re-selects up to `L` channels with strictly positive score
/// `q_n (lambda - sigma_n^2)` (ties to the lowest index) until the set
/// stabilizes. Errors when no channel has positive availability.
pub fn coarse_optimize(inst: &Instance) -> Result<OptResult, Error> {
    inst.validate()?;
    if !inst.channels.iter().any(|c| c.avail_prob > 0.0) {
        return Err(Error::NoSensableChannel);
    }

    let mut by_avail: Vec<usize> = (0..inst.n()).collect();
    by_avail.sort_unstable_by(|&a, &b| {
        inst.channels[b]
            .avail_prob
            .total_cmp(&inst.channels[a].avail_prob)
            .then(a.cmp(&b))
    });
    let initial = SensingSet::from_indices(by_avail.into_iter().take(inst.sensing_budget));

    let scores = |level: f64| -> SensingSet {
        let scored: Vec<(usize, f64)> = (0..inst.n())
            .map(|n| {
                let ch = &inst.channels[n];
                (n, ch.avail_prob * (level - ch.noise_var))
            })
            .collect();
        top_positive(&scored, inst.sensing_budget)
    };

    let (sensing, alloc, level, trace) =
        fixed_point_loop(inst, initial, |_, alloc| Ok(alloc.water_level), scores)?;

    let certified_optimal = certificate_holds(inst, &sensing, level);
    Ok(OptResult {
        method: Method::Coarse,
        sensing,
        alloc,
        trace,
        certified_optimal,
        min_water_level: level,
    })
}

/// Channels that could matter beyond the coarse set: all `n` with
/// `sigma_n^2 <= min_water_level`. The coarse set is always contained in it.
pub fn candidate_set(inst: &Instance, min_water_level: f64) -> SensingSet {
    SensingSet::from_indices(
        (0..inst.n()).filter(|&n| inst.channels[n].noise_var <= min_water_level),
    )
}

/// Closed-form untruncated water level over a set:
/// `(sum q_n sigma_n^2 + P) / sum q_n`.
///
/// Matches the true water level whenever every selected noise floor lies at
/// or below it; nothing here enforces that.
pub fn fine_lambda(inst: &Instance, sensing: &SensingSet) -> Result<f64, Error> {
    let mut width = 0.0;
    let mut weighted_noise = 0.0;
    for n in sensing.iter() {
        let ch = &inst.channels[n];
        width += ch.avail_prob;
        weighted_noise += ch.avail_prob * ch.noise_var;
    }
    if width <= 0.0 {
        return Err(Error::ZeroTotalWidth);
    }
    Ok((weighted_noise + inst.power_budget) / width)
}

/// Fine-stage inclusion score `lambda - sigma^2 e^(1 - sigma^2 / lambda)`.
///
/// Positive exactly when the KKT conditions admit the channel into the
/// optimal set at level `lambda`; zero at `sigma^2 = lambda`.
pub fn fine_score(lambda: f64, noise_var: f64) -> f64 {
    lambda - noise_var * math::exp(1.0 - noise_var / lambda)
}

/// Ranking weight for fine-stage selection:
/// `q ln(lambda / (sigma^2 e^(1 - sigma^2 / lambda)))`.
///
/// The stationarity coefficient the inclusion condition is read off from.
/// Same sign as [`fine_score`] whenever `q > 0`, but orders channels by
/// width-weighted capacity gain; the bare score ignores availability and
/// degenerates to a noise-floor sort once `lambda` dominates the noise.
fn fine_rank_weight(avail_prob: f64, lambda: f64, noise_var: f64) -> f64 {
    avail_prob * (math::ln(lambda / noise_var) - 1.0 + noise_var / lambda)
}

/// Fine stage: re-optimize the coarse set over the candidate channels.
///
/// Returns the coarse selection unchanged when the optimality certificate
/// already fired or when the coarse set is smaller than `L`. Otherwise
/// iterates from the coarse set: [`fine_lambda`] gives each round's level,
/// channels with a positive inclusion score are ranked by their weighted
/// stationarity coefficient, and the loop stops at a set fixed point; the
/// final set is water-filled.
pub fn fine_optimize(inst: &Instance, coarse: &OptResult) -> Result<OptResult, Error> {
    if coarse.certified_optimal || coarse.sensing.len() < inst.sensing_budget {
        return Ok(OptResult {
            method: Method::Fine,
            sensing: coarse.sensing.clone(),
            alloc: coarse.alloc.clone(),
            trace: Vec::new(),
            certified_optimal: coarse.certified_optimal,
            min_water_level: coarse.min_water_level,
        });
    }

    let candidates = candidate_set(inst, coarse.min_water_level);
    let scores = |level: f64| -> SensingSet {
        let scored: Vec<(usize, f64)> = candidates
            .iter()
            .map(|n| {
                let ch = &inst.channels[n];
                (n, fine_rank_weight(ch.avail_prob, level, ch.noise_var))
            })
            .collect();
        top_positive(&scored, inst.sensing_budget)
    };

    let (sensing, alloc, _, trace) = fixed_point_loop(
        inst,
        coarse.sensing.clone(),
        |set, _| fine_lambda(inst, set),
        scores,
    )?;

    Ok(OptResult {
        method: Method::Fine,
        sensing,
        alloc,
        trace,
        certified_optimal: false,
        min_water_level: coarse.min_water_level,
    })
}

/// Run coarse then fine and return the higher-capacity result (the coarse
/// one on ties, which covers the certified regime where they coincide).
pub fn joint_optimize(inst: &Instance) -> Result<OptResult, Error> {
    let coarse = coarse_optimize(inst)?;
    let fine = fine_optimize(inst, &coarse)?;
    if fine.alloc.capacity_nats > coarse.alloc.capacity_nats {
        Ok(fine)
    } else {
        Ok(coarse)
    }
}
