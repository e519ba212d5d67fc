use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::stepper::{Budget, SimState, Stepper};
use crate::error::Result;
use crate::spectral::SpectralField;

/// Kinetic-energy budget after one step.
///
/// `residual` is the defect of the discrete balance over the step, in power
/// units:
///
/// `(K₁ - K₀)/h - [(r₀ + r₁)/2 + h (r'₀ - r'₁)/12]`
///
/// with `r = injection - dissipation - damping` and `r' = rate_slope`. The
/// bracket is the Hermite-corrected trapezoid rule, fourth order like the
/// Runge–Kutta stepper.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedgerRow {
    pub t: f64,
    /// `‖u‖²`
    pub kinetic: f64,
    /// `2ν‖u‖²_Ḣ¹`
    pub dissipation: f64,
    /// `2⟨f, u⟩`
    pub injection: f64,
    /// `2α‖P_κ u‖²`
    pub damping: f64,
    pub residual: f64,
    pub rate_slope: f64,
}

impl EnergyLedgerRow {
    pub fn rate(&self) -> f64 {
        self.injection - self.dissipation - self.damping
    }

    /// `|residual| / (|injection| + dissipation + damping)`.
    pub fn relative_residual(&self) -> f64 {
        let scale = self.injection.abs() + self.dissipation + self.damping;
        if self.residual == 0.0 {
            0.0
        } else {
            self.residual.abs() / scale.max(f64::MIN_POSITIVE)
        }
    }

    /// Row for an initial state, with zero residual.
    pub fn initial(t: f64, b: &Budget) -> Self {
        EnergyLedgerRow {
            t,
            kinetic: b.kinetic,
            dissipation: b.dissipation,
            injection: b.injection,
            damping: b.damping,
            residual: 0.0,
            rate_slope: b.rate_slope,
        }
    }
}

/// Ledger row from the budgets at both ends of a step of length `h`.
pub fn ledger_row(before: &Budget, after: &Budget, t: f64, h: f64) -> EnergyLedgerRow {
    let quad = 0.5 * (before.rate() + after.rate())
        + h * (before.rate_slope - after.rate_slope) / 12.0;
    let residual = (after.kinetic - before.kinetic) / h - quad;
    EnergyLedgerRow {
        residual,
        ..EnergyLedgerRow::initial(t, after)
    }
}

/// Ledger row for two consecutive accepted states.
pub fn ledger(
    before: &SimState,
    after: &SimState,
    f: &SpectralField,
    params: &ModelParams,
) -> Result<EnergyLedgerRow> {
    let s = Stepper::new(f, params);
    let b0 = s.budget(before)?;
    let b1 = s.budget(after)?;
    Ok(ledger_row(&b0, &b1, after.t, after.t - before.t))
}
