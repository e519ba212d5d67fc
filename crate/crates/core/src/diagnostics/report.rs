use serde::{Deserialize, Serialize};

use super::accumulate::{accumulate, AveragingPolicy};
use super::bounds::{dissipation_bounds_check, kolmogorov_and_taylor};
use super::constants::{theoretical_constants, TheoreticalConstants};
use super::envelope::{envelope_check, Envelope};
use super::verdict::Verdict;
use crate::dynamics::{EnergyLedgerRow, ModelParams};
use crate::error::{Error, Result};
use crate::forcing::ForceNumbers;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    InsufficientHorizon,
}

/// Everything diagnosed from one run. Averaged quantities are zero when
/// `status` is `insufficient-horizon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub status: RunStatus,
    pub t_end: f64,
    pub rows: usize,
    pub epsilon: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "Re")]
    pub re: f64,
    #[serde(rename = "lT")]
    pub l_t: f64,
    pub kolmogorov_ratio: f64,
    pub gr_re_ratio: f64,
    pub force_ratio: f64,
    pub taylor_ratio: f64,
    pub k41_taylor: f64,
    pub u2_drift: f64,
    pub windows: usize,
    pub envelope_c: f64,
    pub envelope: Envelope,
    pub constants: TheoreticalConstants,
    /// `Gr ≥ 4 a₂ G₀² / (c₀² γ⁴)`, the hypothesis of the dissipation law.
    pub law_hypothesis: bool,
    pub verdicts: Vec<Verdict>,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.status == RunStatus::Complete && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

/// Everything `diagnose` needs besides the ledger.
#[derive(Clone, Copy, Debug)]
pub struct DiagnoseInput<'a> {
    pub numbers: &'a ForceNumbers,
    pub params: &'a ModelParams,
    pub policy: &'a AveragingPolicy,
    pub box_len: f64,
    pub c_max: f64,
}

/// Full per-run pipeline. Pure in its inputs.
pub fn diagnose(rows: &[EnergyLedgerRow], input: DiagnoseInput<'_>) -> Result<DiagnosticsReport> {
    let DiagnoseInput {
        numbers,
        params,
        policy,
        box_len,
        c_max,
    } = input;
    let envelope = envelope_check(rows, params, &numbers.norms);
    let constants = theoretical_constants(numbers, params.theta, numbers.g0);
    let law_hypothesis = numbers.gr
        >= 4.0 * constants.a2 * numbers.g0 * numbers.g0 / (numbers.c0.powi(2) * numbers.gamma.powi(4));
    let envelope_verdict = match envelope {
        Envelope::Damped { c, .. } => Verdict::le("decay_envelope", c, c_max, 1.0),
        Envelope::Linear { slope, bound, .. } => Verdict::le("growth_slope", slope, bound, 1.0),
    };
    let mut verdicts = vec![envelope_verdict];
    if let Envelope::Linear { max_ratio, .. } = envelope {
        verdicts.push(Verdict::le("growth_pointwise", max_ratio, 1.0, 1.0));
    }
    let t_end = rows.last().map(|r| r.t).unwrap_or(0.0);
    let mut report = DiagnosticsReport {
        status: RunStatus::InsufficientHorizon,
        t_end,
        rows: rows.len(),
        epsilon: 0.0,
        u: 0.0,
        re: 0.0,
        l_t: 0.0,
        kolmogorov_ratio: 0.0,
        gr_re_ratio: 0.0,
        force_ratio: 0.0,
        taylor_ratio: 0.0,
        k41_taylor: 0.0,
        u2_drift: 0.0,
        windows: 0,
        envelope_c: envelope.c(),
        envelope,
        constants,
        law_hypothesis,
        verdicts,
    };
    let avg = match accumulate(rows, policy, params.ell0) {
        Ok(a) => a,
        Err(Error::InsufficientHorizon { .. }) => return Ok(report),
        Err(e) => return Err(e),
    };
    let ratios = kolmogorov_and_taylor(avg.epsilon, avg.u, numbers, params)?;
    report.status = RunStatus::Complete;
    report.epsilon = avg.epsilon;
    report.u = avg.u;
    report.u2_drift = avg.u2_drift;
    report.windows = avg.windows;
    report.re = ratios.re;
    report.l_t = ratios.l_t;
    report.kolmogorov_ratio = ratios.kolmogorov_ratio;
    report.gr_re_ratio = ratios.gr_re_ratio;
    report.force_ratio = ratios.force_ratio;
    report.taylor_ratio = ratios.taylor_ratio;
    report.k41_taylor = ratios.k41_taylor;
    report
        .verdicts
        .extend(dissipation_bounds_check(avg.epsilon, avg.u, numbers, params, box_len));
    Ok(report)
}

/// Largest violation of the integrated energy balance
/// `K(t) + ∫(dissipation + damping) ≤ K(0) + ∫ injection` over all ledger
/// times, after crediting the accumulated absolute residual. Integrals use
/// the same corrected trapezoid as the ledger. A value `≤ 0` means the
/// inequality holds everywhere.
pub fn cumulative_energy_violation(rows: &[EnergyLedgerRow]) -> f64 {
    let Some(first) = rows.first() else {
        return 0.0;
    };
    let mut work = 0.0;
    let mut slack = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let h = b.t - a.t;
        work += h * ((a.rate() + b.rate()) / 2.0 + h * (a.rate_slope - b.rate_slope) / 12.0);
        slack += h * b.residual.abs();
        let excess = b.kinetic - first.kinetic - work;
        let scale = b.kinetic.abs().max(first.kinetic.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((excess - slack) / scale);
    }
    if worst == f64::NEG_INFINITY {
        0.0
    } else {
        worst
    }
}
