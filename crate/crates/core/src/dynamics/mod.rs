//! Time integration and the per-step energy ledger.

mod checkpoint;
mod init;
mod ledger;
mod params;
mod run;
mod stepper;

pub use checkpoint::{read_field_file, write_field_file, FieldFile, FieldKind, FORMAT_VERSION};
pub use init::{random_solenoidal, stokes_speed_estimate};
pub use ledger::{ledger, ledger_row, EnergyLedgerRow};
pub use params::{ModelParams, DEFAULT_CFL_MAX};
pub use run::{run, MemorySink, RunControl, Sink};
pub use stepper::{cfl_number, step, step_mollified, Budget, SimState, Stepper};
