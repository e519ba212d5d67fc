//! Long-time averages, derived numbers, theoretical constants and verdicts.

mod accumulate;
mod bounds;
mod constants;
mod envelope;
pub mod fit;
mod report;
mod sweep;
mod verdict;

pub use accumulate::{accumulate, AveragingPolicy, Averages};
pub use bounds::{dissipation_bounds_check, kolmogorov_and_taylor, Ratios, BOUND_TOL};
pub use constants::{a1, a2, theoretical_constants, TheoreticalConstants};
pub use envelope::{envelope_check, Envelope, DEFAULT_C_MAX};
pub use report::{cumulative_energy_violation, diagnose, DiagnoseInput, DiagnosticsReport, RunStatus};
pub use sweep::{sweep_analysis, SweepAnalysis, SweepPolicy, MIN_SWEEP_POINTS, SLOPE_TARGETS};
pub use verdict::{all_pass, Verdict};
