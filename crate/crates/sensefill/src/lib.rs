//! File formats and experiment drivers around [`sensefill_core`]: instance
//! JSON with exact float round-tripping, the results CSV schema, and the
//! seed × SNR × method sweep runner the CLI is built on.

pub mod io;
pub mod report;

pub use io::{read_instance, write_instance, Error};
pub use report::{parse_method, run_sweep, solve_with, ResultRow, SweepSpec};
