//! Experiment drivers behind the `dagqr` command line tool.
//!
//! Each driver returns plain rows; the binary handles argument parsing and
//! output. Timings measure the executor call only, on a fresh copy of the
//! input for every repetition.

pub mod check;
pub mod experiments;
pub mod args;
pub mod timing;

pub use check::{cmd_check, CheckGrid, CheckSummary, Mismatch};
pub use experiments::{cmd_scale, cmd_sweep, cmd_throughput, ScaleRow, SweepRow, ThroughputRow};
pub use args::{parse_list, parse_range, parse_size, Size};
pub use timing::{median, time_run, BenchRecord, RunSettings};
