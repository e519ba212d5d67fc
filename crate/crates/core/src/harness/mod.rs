//! Config files, run directories, manifests and the commands behind the
//! `kolmodamp` binary.

mod commands;
mod compare;
mod config;
pub mod files;
mod manifest;
mod presets;

pub use commands::{
    aggregate, cmd_report, cmd_resume, cmd_run, cmd_sweep, cmd_verify, error_exit_code, point_dir,
    recompute, RunOutcome, RunRecord, Status, Summary, SweepReport, EXIT_CONFIG, EXIT_HORIZON,
    EXIT_MISMATCH, EXIT_OK, EXIT_SOLVER, EXIT_VERDICT, RUN_RECORD, SWEEP_CSV_HEADER,
};
pub use compare::{diff_reports, diff_sweep};
pub use config::{
    AveragingSection, ExperimentConfig, ForceSection, GridSection, Initial, InitialSection,
    IoSection, Mode, ModelSection, ProfileSection, ResolvedRun, SweepSection,
    DEFAULT_CFL_TARGET, DEFAULT_ENERGY_RATIO, DEFAULT_MAX_MODE,
};
pub use manifest::{digest_tree, sha256_hex, RunManifest, CODE_VERSION};
pub use presets::{preset, PRESETS};
