//! Command-line harness around `eoplab-core`: state ingestion, Werner
//! sweeps, bound certificates and the convexity probe, with machine-readable
//! output.
//!
//! Exit-code contract, shared by every subcommand:
//!
//! * `0` success,
//! * `2` input error (unreadable or invalid files, bad parameters),
//! * `3` numerical-quality warning (the optimizer flagged a line-search
//!   failure); results are still printed.

pub mod commands;
pub mod files;
pub mod format;
pub mod runner;

pub use commands::{
    run_bound, run_delta_probe, run_eop, run_werner_sweep, BoundReport, EopReport,
    ProbeFlag, ProbeReport, StateInput, SweepOutcome,
};

/// Process exit codes named once.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT_ERROR: i32 = 2;
    pub const QUALITY_WARNING: i32 = 3;
}
