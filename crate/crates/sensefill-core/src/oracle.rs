//! Exhaustive search over sensing subsets: the ground-truth baseline.
//!
//! Water-filling capacity never decreases when a set grows (extra channels
//! can always sit at zero power), so searching subsets of size exactly `L`
//! is enough; anything smaller is dominated by padding. At `N = 16, L = 8`
//! that is 12,870 water-fills per instance — cheap with the exact
//! breakpoint solver.
//!
//! Enumeration is lexicographic and supports unranked starting points
//! ([`SubsetIter::from_rank`]), so disjoint rank ranges can be evaluated on
//! separate threads and reduced with [`better_candidate`]; the reduction is
//! associative and reproduces the serial result bit for bit, including the
//! lexicographic tie-break.

use alloc::vec::Vec;

use crate::model::{Allocation, Instance, SensingSet};
use crate::selector::{Method, OptResult};
use crate::waterfill::solve_waterfill;
use crate::Error;

/// Default limit on the number of subsets an exhaustive search will visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Binomial coefficient `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic iterator over all `k`-subsets of `{0, .., n-1}`.
pub struct SubsetIter {
    n: usize,
    k: usize,
    current: Vec<usize>,
    state: IterState,
}

enum IterState {
    Fresh,
    Running,
    Done,
}

impl SubsetIter {
    pub fn new(n: usize, k: usize) -> Result<Self, Error> {
        if k > n {
            return Err(Error::InvalidSubsetSize { k, n });
        }
        Ok(Self { n, k, current: (0..k).collect(), state: IterState::Fresh })
    }

    /// Start at the subset with the given lexicographic rank
    /// (combinatorial number system unranking); `rank >= C(n, k)` yields an
    /// exhausted iterator.
    pub fn from_rank(n: usize, k: usize, rank: u64) -> Result<Self, Error> {
        if k > n {
            return Err(Error::InvalidSubsetSize { k, n });
        }
        if rank >= binomial(n, k) {
            return Ok(Self { n, k, current: Vec::new(), state: IterState::Done });
        }
        let mut remaining = rank;
        let mut subset = Vec::with_capacity(k);
        let mut next_free = 0;
        for slot in 0..k {
            let mut candidate = next_free;
            loop {
                // Subsets that keep `candidate` in this slot.
                let block = binomial(n - 1 - candidate, k - 1 - slot);
                if remaining < block {
                    break;
                }
                remaining -= block;
                candidate += 1;
            }
            subset.push(candidate);
            next_free = candidate + 1;
        }
        Ok(Self { n, k, current: subset, state: IterState::Fresh })
    }

    /// Lending form of `next`: yields the subset in place, no allocation.
    pub fn advance(&mut self) -> Option<&[usize]> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                return Some(&self.current);
            }
            IterState::Running => {}
        }
        // Rightmost position that can still move up.
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.state = IterState::Done;
                return None;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}

impl Iterator for SubsetIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.advance().map(|s| s.to_vec())
    }
}

/// All `k`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Result<SubsetIter, Error> {
    SubsetIter::new(n, k)
}

/// True when `challenger` beats `incumbent`: higher capacity, or equal
/// capacity with a lexicographically smaller index set. Associative as a
/// reduction, so chunked evaluation matches serial evaluation exactly.
pub fn better_candidate(
    incumbent: &(SensingSet, Allocation),
    challenger: &(SensingSet, Allocation),
) -> bool {
    match challenger.1.capacity_nats.total_cmp(&incumbent.1.capacity_nats) {
        core::cmp::Ordering::Greater => true,
        core::cmp::Ordering::Less => false,
        core::cmp::Ordering::Equal => challenger.0 < incumbent.0,
    }
}

/// Water-fill every size-`L` subset within a contiguous rank range
/// `start..end` and return the best, or `None` if the range holds no
/// feasible (positive-width) subset.
pub fn best_in_rank_range(
    inst: &Instance,
    start: u64,
    end: u64,
) -> Result<Option<(SensingSet, Allocation)>, Error> {
    let mut iter = SubsetIter::from_rank(inst.n(), inst.sensing_budget, start)?;
    let mut best: Option<(SensingSet, Allocation)> = None;
    let mut visited = 0;
    while visited < end.saturating_sub(start) {
        let Some(subset) = iter.advance() else { break };
        visited += 1;
        let sensing = SensingSet::from_indices(subset.iter().copied());
        let alloc = match solve_waterfill(inst, &sensing) {
            Ok(alloc) => alloc,
            // All-zero-width subsets cannot absorb the budget; skip them.
            Err(Error::ZeroTotalWidth) => continue,
            Err(e) => return Err(e),
        };
        let candidate = (sensing, alloc);
        match &best {
            Some(incumbent) if !better_candidate(incumbent, &candidate) => {}
            _ => best = Some(candidate),
        }
    }
    Ok(best)
}

/// Exhaustive search with the default enumeration cap.
pub fn exhaustive_search(inst: &Instance) -> Result<OptResult, Error> {
    exhaustive_search_capped(inst, DEFAULT_ENUMERATION_CAP)
}

/// Enumerate every size-`L` sensing set, water-fill each, and return the
/// maximum-capacity one (ties to the lexicographically smallest set).
///
/// Errors when `C(N, L)` exceeds `cap`, or when no channel has positive
/// availability (every subset would be degenerate).
pub fn exhaustive_search_capped(inst: &Instance, cap: u64) -> Result<OptResult, Error> {
    inst.validate()?;
    let subsets = binomial(inst.n(), inst.sensing_budget);
    if subsets > cap {
        return Err(Error::EnumerationCapExceeded { subsets, cap });
    }
    if !inst.channels.iter().any(|c| c.avail_prob > 0.0) {
        return Err(Error::NoSensableChannel);
    }

    let (sensing, alloc) = best_in_rank_range(inst, 0, subsets)?
        .expect("some subset contains a positive-availability channel");

    Ok(OptResult {
        method: Method::Exhaustive,
        sensing,
        min_water_level: alloc.water_level,
        alloc,
        trace: Vec::new(),
        certified_optimal: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChannelProfile;

    fn inst(q: &[f64], noise: &[f64], p: f64, l: usize) -> Instance {
        let channels =
            q.iter().zip(noise).map(|(&q, &s)| ChannelProfile::new(q, s)).collect();
        Instance::new(channels, p, l)
    }

    #[test]
    fn subsets_three_choose_two() {
        let got: Vec<Vec<usize>> = subsets_of_size(3, 2).unwrap().collect();
        assert_eq!(got, alloc::vec![alloc::vec![0, 1], alloc::vec![0, 2], alloc::vec![1, 2]]);
    }

    #[test]
    fn subsets_sixteen_choose_eight_count() {
        assert_eq!(subsets_of_size(16, 8).unwrap().count(), 12870);
        assert_eq!(binomial(16, 8), 12870);
    }

    #[test]
    fn subsets_size_zero_is_single_empty() {
        let got: Vec<Vec<usize>> = subsets_of_size(4, 0).unwrap().collect();
        assert_eq!(got, alloc::vec![Vec::<usize>::new()]);
        assert_eq!(binomial(4, 0), 1);
    }

    #[test]
    fn subsets_invalid_size() {
        assert!(matches!(subsets_of_size(3, 4), Err(Error::InvalidSubsetSize { k: 4, n: 3 })));
    }

    #[test]
    fn unranking_matches_enumeration() {
        for (n, k) in [(6, 3), (7, 2), (5, 5), (8, 1)] {
            let all: Vec<Vec<usize>> = subsets_of_size(n, k).unwrap().collect();
            for (rank, want) in all.iter().enumerate() {
                let mut iter = SubsetIter::from_rank(n, k, rank as u64).unwrap();
                assert_eq!(iter.advance().unwrap(), want.as_slice(), "n={n} k={k} rank={rank}");
            }
            let mut past_end = SubsetIter::from_rank(n, k, binomial(n, k)).unwrap();
            assert!(past_end.advance().is_none());
        }
    }

    #[test]
    fn single_channel_budget_picks_best_tradeoff() {
        // Per-channel capacities (q/2)·ln(1 + (P/q)/σ²): 0.199, 0.275, 0.152.
        let inst = inst(&[0.9, 0.5, 0.1], &[2.0, 1.0, 0.5], 1.0, 1);
        let best = exhaustive_search(&inst).unwrap();
        assert_eq!(best.sensing, SensingSet::from_indices([1]));
        let want = 0.25 * 3.0f64.ln();
        assert!((best.alloc.capacity_nats - want).abs() < 1e-12);
        assert!(best.certified_optimal);
    }

    #[test]
    fn full_budget_equals_plain_waterfill() {
        let inst = inst(&[0.9, 0.5, 0.1], &[2.0, 1.0, 0.5], 1.0, 3);
        let best = exhaustive_search(&inst).unwrap();
        assert_eq!(best.sensing, SensingSet::from_indices([0, 1, 2]));
        let full = solve_waterfill(&inst, &SensingSet::from_indices([0, 1, 2])).unwrap();
        assert_eq!(best.alloc, full);
    }

    #[test]
    fn pair_budget_on_worked_example() {
        let inst = inst(&[0.9, 0.8, 0.1], &[5.0, 1.0, 0.1], 1.0, 2);
        let best = exhaustive_search(&inst).unwrap();
        assert_eq!(best.sensing, SensingSet::from_indices([1, 2]));
    }

    #[test]
    fn chunked_evaluation_matches_serial() {
        let inst = crate::generate_instance(11, 10, 4, 10.0, 3).unwrap();
        let total = binomial(10, 4);
        let serial = best_in_rank_range(&inst, 0, total).unwrap().unwrap();

        for chunks in [2u64, 3, 7] {
            let mut best: Option<(SensingSet, Allocation)> = None;
            let step = total.div_ceil(chunks);
            for c in 0..chunks {
                let lo = c * step;
                let hi = (lo + step).min(total);
                if let Some(candidate) = best_in_rank_range(&inst, lo, hi).unwrap() {
                    match &best {
                        Some(incumbent) if !better_candidate(incumbent, &candidate) => {}
                        _ => best = Some(candidate),
                    }
                }
            }
            let chunked = best.unwrap();
            assert_eq!(chunked.0, serial.0);
            assert_eq!(chunked.1, serial.1);
        }
    }

    #[test]
    fn lexicographic_tie_break_on_flat_channels() {
        // Every pair ties exactly; the lexicographically smallest must win.
        let inst = inst(&[0.5; 4], &[1.0; 4], 2.0, 2);
        let best = exhaustive_search(&inst).unwrap();
        assert_eq!(best.sensing, SensingSet::from_indices([0, 1]));
    }

    #[test]
    fn enumeration_cap() {
        let inst = inst(&[0.5; 16], &[1.0; 16], 2.0, 8);
        let err = exhaustive_search_capped(&inst, 1000).unwrap_err();
        assert_eq!(err, Error::EnumerationCapExceeded { subsets: 12870, cap: 1000 });
    }

    #[test]
    fn capacity_monotone_in_budget() {
        let inst_base = crate::generate_instance(3, 8, 1, 6.0, 3).unwrap();
        let mut previous = 0.0;
        for l in 1..=8 {
            let inst = Instance::new(inst_base.channels.clone(), inst_base.power_budget, l);
            let best = exhaustive_search(&inst).unwrap();
            assert!(
                best.alloc.capacity_nats >= previous - 1e-12,
                "L={l}: {} < {previous}",
                best.alloc.capacity_nats
            );
            previous = best.alloc.capacity_nats;
        }
    }

    #[test]
    fn all_zero_availability_is_an_error() {
        let inst = inst(&[0.0, 0.0], &[1.0, 2.0], 1.0, 1);
        assert_eq!(exhaustive_search(&inst), Err(Error::NoSensableChannel));
    }
}
