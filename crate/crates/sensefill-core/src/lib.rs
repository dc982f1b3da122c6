//! Joint sensing-channel selection and power allocation for interweave
//! cognitive radios.
//!
//! An interweave cognitive radio may transmit on a licensed channel only when
//! the licensed user is absent. Each of `N` dissimilar parallel channels is
//! free with probability `q_n` and carries Gaussian noise of variance
//! `sigma_n^2`; the radio can sense at most `L` channels per slot and spends
//! an average power budget `P` across the ones it finds free. This crate
//! answers the coupled question "which channels should be sensed, and how
//! should power be spread over them" for the ergodic static policy:
//!
//! - [`waterfill`] — exact modified water-filling over a fixed sensing set,
//!   where each channel occupies width `q_n` instead of unit width
//! - [`selector`] — the two-stage iterative heuristic: a coarse fixed-point
//!   search for the lowest water level, an optimality certificate, and a fine
//!   stage over the reduced candidate set
//! - [`oracle`] — exhaustive search over all size-`L` sensing subsets, the
//!   ground-truth baseline
//! - [`simulator`] — seeded Monte Carlo validation of the ergodic capacity
//!   model against per-slot Bernoulli occupancy
//! - [`model`] — domain types, validation, capacity evaluation, and random
//!   instance generation with frequency-selective fading
//!
//! All capacities are in nats (natural log) internally; convert to bits by
//! dividing by `ln 2`. Everything is a pure function over immutable inputs
//! and safe to call from multiple threads.
//!
//! The crate is `no_std`-compatible (requires `alloc`): disable the default
//! `std` feature and enable `libm` for the float math.
//!
//! # Example
//!
//! ```rust
//! use sensefill_core::{generate_instance, joint_optimize, exhaustive_search};
//!
//! let inst = generate_instance(7, 16, 8, 10.0, 4).unwrap();
//! let heuristic = joint_optimize(&inst).unwrap();
//! let optimal = exhaustive_search(&inst).unwrap();
//! assert!(heuristic.alloc.capacity_nats <= optimal.alloc.capacity_nats + 1e-12);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("enable either the `std` or the `libm` feature");

extern crate alloc;

mod error;
mod math;

pub mod model;
pub mod oracle;
pub mod rng;
pub mod selector;
pub mod simulator;
pub mod waterfill;

pub use error::Error;
pub use model::{
    capacity, capacity_of_powers, generate_instance, Allocation, ChannelProfile, Instance,
    SensingSet,
};
pub use oracle::{
    binomial, exhaustive_search, exhaustive_search_capped, subsets_of_size, SubsetIter,
    DEFAULT_ENUMERATION_CAP,
};
pub use selector::{
    candidate_set, certify_optimal, coarse_optimize, fine_lambda, fine_optimize, fine_score,
    joint_optimize, Method, OptResult, TraceStep,
};
pub use simulator::{simulate, SimResult};
pub use waterfill::solve_waterfill;
