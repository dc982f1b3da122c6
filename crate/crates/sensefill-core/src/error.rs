use core::fmt;

/// Errors surfaced by instance validation, the solvers, and the simulator.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `avail_prob` outside `[0, 1]` (or non-finite) on the given channel.
    AvailProbOutOfRange { channel: usize, value: f64 },
    /// `noise_var` not a positive finite number on the given channel.
    NoiseVarNotPositive { channel: usize, value: f64 },
    /// Power budget not a positive finite number.
    PowerBudgetNotPositive { value: f64 },
    /// Sensing budget outside `1..=N`.
    SensingBudgetOutOfRange { budget: usize, n: usize },
    /// Instance has no channels.
    NoChannels,
    /// Impulse response must have at least one tap.
    TapsNotPositive,
    /// A channel index refers past the end of the instance.
    IndexOutOfRange { index: usize, n: usize },
    /// Water-filling asked on an empty sensing set.
    EmptySensingSet,
    /// Every selected channel has `avail_prob == 0`, so no water level can
    /// absorb the power budget.
    ZeroTotalWidth,
    /// Selection asked on an instance where no channel has `avail_prob > 0`.
    NoSensableChannel,
    /// Exhaustive enumeration would exceed the configured cap.
    EnumerationCapExceeded { subsets: u64, cap: u64 },
    /// Subset size larger than the ground set.
    InvalidSubsetSize { k: usize, n: usize },
    /// Allocation carries power on a channel outside the sensing set, or has
    /// the wrong length.
    AllocationMismatch { channel: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AvailProbOutOfRange { channel, value } => {
                write!(f, "channel {channel}: avail_prob out of range (got {value}, want [0, 1])")
            }
            Error::NoiseVarNotPositive { channel, value } => {
                write!(f, "channel {channel}: noise_var must be positive and finite (got {value})")
            }
            Error::PowerBudgetNotPositive { value } => {
                write!(f, "power_budget must be positive and finite (got {value})")
            }
            Error::SensingBudgetOutOfRange { budget, n } => {
                if *budget == 0 {
                    write!(f, "sensing_budget must be ≥ 1")
                } else {
                    write!(f, "sensing_budget must be ≤ N (got {budget}, N = {n})")
                }
            }
            Error::NoChannels => write!(f, "instance must have at least one channel"),
            Error::TapsNotPositive => write!(f, "impulse response needs at least one tap"),
            Error::IndexOutOfRange { index, n } => {
                write!(f, "channel index {index} out of range (N = {n})")
            }
            Error::EmptySensingSet => write!(f, "sensing set is empty"),
            Error::ZeroTotalWidth => write!(f, "degenerate: zero total width"),
            Error::NoSensableChannel => {
                write!(f, "no channel has avail_prob > 0; nothing can be sensed usefully")
            }
            Error::EnumerationCapExceeded { subsets, cap } => {
                write!(f, "exhaustive search over {subsets} subsets exceeds cap {cap}")
            }
            Error::InvalidSubsetSize { k, n } => {
                write!(f, "subset size {k} invalid for ground set of {n}")
            }
            Error::AllocationMismatch { channel } => {
                write!(f, "allocation inconsistent with sensing set at channel {channel}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
