use serde::{Deserialize, Serialize};

use crate::dynamics::EnergyLedgerRow;
use crate::error::{Error, Result};

/// Finite-time surrogate for the limsup in the definitions of ε and U.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragingPolicy {
    /// Time discarded at the start.
    pub burn_in: f64,
    /// Length of each trailing window.
    pub window: f64,
    /// Use every `stride`-th row.
    #[serde(default = "one")]
    pub stride: usize,
}

fn one() -> usize {
    1
}

impl AveragingPolicy {
    /// `burn_in = 5/β`, three windows of `window_factor/β` each.
    pub fn from_beta(beta: f64, window_factor: f64) -> Self {
        AveragingPolicy {
            burn_in: 5.0 / beta,
            window: window_factor / beta,
            stride: 1,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.burn_in + 3.0 * self.window
    }

    /// Whether the burn-in covers five e-folds of the envelope decay.
    pub fn burn_in_ok(&self, beta: f64) -> bool {
        self.burn_in * beta >= 5.0 - 1e-9
    }
}

/// ε and U from a ledger.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub epsilon: f64,
    #[serde(rename = "U")]
    pub u: f64,
    /// Relative change of the windowed `‖u‖²` mean between the last two
    /// windows.
    pub u2_drift: f64,
    pub windows: usize,
}

/// Mean shifted by the first sample, so constant input returns that
/// constant exactly.
fn shifted_mean(v: &[f64]) -> f64 {
    let x0 = v[0];
    let dev: f64 = v.iter().map(|x| x - x0).sum();
    x0 + dev / v.len() as f64
}

/// `ε = ν avg‖u‖²_Ḣ¹ / ℓ₀³` and `U = (avg‖u‖² / ℓ₀³)^{1/2}`, each the maximum
/// over trailing windows of length `policy.window` that start after the
/// burn-in.
pub fn accumulate(
    rows: &[EnergyLedgerRow],
    policy: &AveragingPolicy,
    ell0: f64,
) -> Result<Averages> {
    let need = policy.horizon();
    let t_end = rows.last().map(|r| r.t).unwrap_or(0.0);
    if rows.is_empty() || t_end < need * (1.0 - 1e-12) {
        return Err(Error::InsufficientHorizon { have: t_end, need });
    }
    let stride = policy.stride.max(1);
    let sampled: Vec<&EnergyLedgerRow> = rows.iter().step_by(stride).collect();
    let mut k_means = Vec::new();
    let mut d_means = Vec::new();
    let mut hi = t_end;
    let eps = 1e-9 * policy.window;
    loop {
        let lo = hi - policy.window;
        if lo < policy.burn_in - eps {
            break;
        }
        let inside: Vec<&&EnergyLedgerRow> = sampled
            .iter()
            .filter(|r| r.t > lo + eps && r.t <= hi + eps)
            .collect();
        if inside.is_empty() {
            break;
        }
        let k: Vec<f64> = inside.iter().map(|r| r.kinetic).collect();
        let d: Vec<f64> = inside.iter().map(|r| r.dissipation).collect();
        k_means.push(shifted_mean(&k));
        d_means.push(shifted_mean(&d));
        hi = lo;
    }
    if k_means.len() < 3 {
        return Err(Error::InsufficientHorizon { have: t_end, need });
    }
    let vol = ell0.powi(3);
    let kmax = k_means.iter().cloned().fold(f64::MIN, f64::max);
    let dmax = d_means.iter().cloned().fold(f64::MIN, f64::max);
    let u2_drift = if k_means[0] != 0.0 {
        (k_means[0] - k_means[1]).abs() / k_means[0].abs()
    } else {
        0.0
    };
    Ok(Averages {
        // dissipation column is 2ν‖u‖²_Ḣ¹
        epsilon: dmax / (2.0 * vol),
        u: (kmax / vol).sqrt(),
        u2_drift,
        windows: k_means.len(),
    })
}
