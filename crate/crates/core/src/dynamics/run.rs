use super::ledger::{ledger_row, EnergyLedgerRow};
use super::params::ModelParams;
use super::stepper::{SimState, Stepper};
use crate::error::Result;
use crate::spectral::SpectralField;

/// Output cadence in steps; 0 disables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunControl {
    pub snapshot_every: u64,
    pub checkpoint_every: u64,
}

/// Receiver of run output.
pub trait Sink {
    fn row(&mut self, row: &EnergyLedgerRow) -> Result<()>;
    fn snapshot(&mut self, _state: &SimState) -> Result<()> {
        Ok(())
    }
    fn checkpoint(&mut self, _state: &SimState, _params: &ModelParams) -> Result<()> {
        Ok(())
    }
    fn flush(&mut self) -> Result<()> {
        Ok(())
    }
}

/// Keeps everything in memory.
#[derive(Default)]
pub struct MemorySink {
    pub rows: Vec<EnergyLedgerRow>,
    pub snapshots: Vec<SimState>,
    pub checkpoints: Vec<SimState>,
}

impl Sink for MemorySink {
    fn row(&mut self, row: &EnergyLedgerRow) -> Result<()> {
        self.rows.push(*row);
        Ok(())
    }
    fn snapshot(&mut self, state: &SimState) -> Result<()> {
        self.snapshots.push(state.clone());
        Ok(())
    }
    fn checkpoint(&mut self, state: &SimState, _params: &ModelParams) -> Result<()> {
        self.checkpoints.push(state.clone());
        Ok(())
    }
}

/// Integrates from `state` to `params.t_end`.
///
/// A fresh start (`step_index == 0`) first emits a row for the initial
/// state, then one row per step. Resuming from a checkpoint emits only the
/// rows of the remaining steps, which are bit-identical to those of an
/// uninterrupted run. On error the sink is flushed before returning.
pub fn run(
    state: SimState,
    f: &SpectralField,
    params: &ModelParams,
    control: RunControl,
    sink: &mut dyn Sink,
) -> Result<SimState> {
    let out = drive(state, f, params, control, sink);
    let flushed = sink.flush();
    let state = out?;
    flushed?;
    Ok(state)
}

fn drive(
    mut state: SimState,
    f: &SpectralField,
    params: &ModelParams,
    control: RunControl,
    sink: &mut dyn Sink,
) -> Result<SimState> {
    let total = params.steps();
    if state.step_index >= total {
        return Ok(state);
    }
    let stepper = Stepper::new(f, params);
    let (mut budget, mut k1, _) = stepper.probe(&state)?;
    if state.step_index == 0 {
        sink.row(&EnergyLedgerRow::initial(state.t, &budget))?;
    }
    let every = |n: u64, i: u64| n > 0 && i % n == 0;
    while state.step_index < total {
        let next = stepper.step_with(&state, &k1)?;
        let (b1, k1n, _) = stepper.probe(&next)?;
        sink.row(&ledger_row(&budget, &b1, next.t, params.dt))?;
        if every(control.snapshot_every, next.step_index) {
            sink.snapshot(&next)?;
        }
        if every(control.checkpoint_every, next.step_index) {
            sink.checkpoint(&next, params)?;
        }
        state = next;
        budget = b1;
        k1 = k1n;
    }
    Ok(state)
}
