use serde::{Deserialize, Serialize};

use crate::dynamics::{EnergyLedgerRow, ModelParams};
use crate::spectral::NormSet;

/// Default threshold on the envelope constant.
pub const DEFAULT_C_MAX: f64 = 10.0;

/// Result of checking the L² decay envelope over a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Envelope {
    /// `‖u(t)‖² ≤ e^{-βt}‖u₀‖² + c ‖f‖²_Ḣ⁻¹/(νβ) (1 - e^{-βt})` with the
    /// smallest `c` that makes it hold at every ledger time. `c` may be
    /// negative when the run stays below the free decay.
    Damped { c: f64, beta: f64 },
    /// For `β = 0`: growth control `‖u(t)‖² ≤ ‖u₀‖² + t ‖f‖²_Ḣ⁻¹/ν`.
    /// `slope` is the least-squares slope of `‖u(t)‖² - ‖u₀‖²` against t,
    /// `max_ratio` the largest pointwise `(‖u(t)‖² - ‖u₀‖²)/(t ‖f‖²_Ḣ⁻¹/ν)`.
    Linear {
        slope: f64,
        bound: f64,
        max_ratio: f64,
    },
}

impl Envelope {
    pub fn passes(&self, c_max: f64) -> bool {
        match *self {
            Envelope::Damped { c, .. } => c <= c_max,
            Envelope::Linear {
                slope,
                bound,
                max_ratio,
            } => slope <= bound && max_ratio <= 1.0,
        }
    }

    /// The envelope constant, or the pointwise growth ratio for `β = 0`.
    pub fn c(&self) -> f64 {
        match *self {
            Envelope::Damped { c, .. } => c,
            Envelope::Linear { max_ratio, .. } => max_ratio,
        }
    }
}

pub fn envelope_check(rows: &[EnergyLedgerRow], params: &ModelParams, f_norms: &NormSet) -> Envelope {
    let beta = params.beta();
    let fh = f_norms.hm1 * f_norms.hm1;
    let Some(first) = rows.first() else {
        return Envelope::Damped { c: 0.0, beta };
    };
    let k0 = first.kinetic;
    let t0 = first.t;
    if beta > 0.0 {
        let scale = fh / (params.nu * beta);
        let mut c = f64::NEG_INFINITY;
        for r in rows.iter().filter(|r| r.t > t0) {
            let e = (-beta * (r.t - t0)).exp();
            let excess = r.kinetic - e * k0;
            let room = scale * (-(-beta * (r.t - t0)).exp_m1());
            let need = if room > 0.0 {
                excess / room
            } else if excess <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            c = c.max(need);
        }
        if c == f64::NEG_INFINITY {
            c = 0.0;
        }
        Envelope::Damped { c, beta }
    } else {
        let bound = fh / params.nu;
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.t > t0)
            .map(|r| (r.t - t0, r.kinetic - k0))
            .collect();
        let mut max_ratio = f64::NEG_INFINITY;
        for &(t, y) in &pts {
            let room = t * bound;
            let ratio = if room > 0.0 {
                y / room
            } else if y <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            max_ratio = max_ratio.max(ratio);
        }
        if pts.is_empty() {
            max_ratio = 0.0;
        }
        Envelope::Linear {
            slope: super::fit::slope(&pts),
            bound,
            max_ratio,
        }
    }
}
