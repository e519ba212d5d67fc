use serde::{Deserialize, Serialize};

use super::fit::{band_width, log_log_slope};
use super::report::DiagnosticsReport;
use super::verdict::Verdict;
use crate::error::{Error, Result};
use crate::forcing::ForceNumbers;

/// Sweep thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPolicy {
    /// Largest allowed max/min of Gr/Re², FL/U² and εL/U³.
    pub band_max: f64,
    /// Largest allowed max/min of ℓ_T/ℓ₀.
    pub taylor_band_max: f64,
    /// Smallest Gr max/min for the sweep to count.
    pub gr_span_min: f64,
    /// Smallest max/min of ℓ₀/√Re.
    pub shrink_min: f64,
    /// Relative tolerance on the scaling exponents.
    pub slope_tol: f64,
}

impl Default for SweepPolicy {
    fn default() -> Self {
        SweepPolicy {
            band_max: 5.0,
            taylor_band_max: 3.0,
            gr_span_min: 100.0,
            shrink_min: 10.0,
            slope_tol: 0.2,
        }
    }
}

pub const MIN_SWEEP_POINTS: usize = 4;

/// Scaling exponents in ℓ: Gr ∝ ℓ⁶, U ∝ ℓ^{3/2}, ε ∝ ℓ³.
pub const SLOPE_TARGETS: [f64; 3] = [6.0, 1.5, 3.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepAnalysis {
    pub ells: Vec<f64>,
    pub gr: Vec<f64>,
    pub re: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
    pub epsilon: Vec<f64>,
    #[serde(rename = "lT")]
    pub l_t: Vec<f64>,
    pub gr_slope: f64,
    pub u_slope: f64,
    pub eps_slope: f64,
    pub gr_span: f64,
    pub gr_re_band: f64,
    pub force_band: f64,
    pub kolmogorov_band: f64,
    pub taylor_band: f64,
    /// max/min of ℓ₀/√Re, the turbulent Taylor-scale prediction.
    pub turbulent_taylor_shrink: f64,
    pub verdicts: Vec<Verdict>,
}

/// Aggregates completed runs of an ℓ sweep. Points are sorted by ℓ.
pub fn sweep_analysis(
    points: &[(DiagnosticsReport, ForceNumbers)],
    policy: &SweepPolicy,
) -> Result<SweepAnalysis> {
    if points.len() < MIN_SWEEP_POINTS {
        return Err(Error::InsufficientSweep { have: points.len() });
    }
    let mut pts: Vec<&(DiagnosticsReport, ForceNumbers)> = points.iter().collect();
    pts.sort_by(|a, b| a.1.ell.total_cmp(&b.1.ell));
    let col = |f: &dyn Fn(&DiagnosticsReport, &ForceNumbers) -> f64| -> Vec<f64> {
        pts.iter().map(|(r, n)| f(r, n)).collect()
    };
    let ells = col(&|_, n| n.ell);
    let gr = col(&|_, n| n.gr);
    let re = col(&|r, _| r.re);
    let u = col(&|r, _| r.u);
    let eps = col(&|r, _| r.epsilon);
    let gr_slope = log_log_slope(&ells, &gr);
    let u_slope = log_log_slope(&ells, &u);
    let eps_slope = log_log_slope(&ells, &eps);
    let gr_span = band_width(&gr);
    let gr_re_band = band_width(&col(&|r, _| r.gr_re_ratio));
    let force_band = band_width(&col(&|r, _| r.force_ratio));
    let kolmogorov_band = band_width(&col(&|r, _| r.kolmogorov_ratio));
    let taylor_band = band_width(&col(&|r, _| r.taylor_ratio));
    let turbulent_taylor_shrink = band_width(&col(&|r, _| 1.0 / r.re.sqrt()));
    let verdicts = vec![
        Verdict::ge("gr_span", gr_span, policy.gr_span_min),
        Verdict::le("gr_re_band", gr_re_band, policy.band_max, 1.0),
        Verdict::le("force_band", force_band, policy.band_max, 1.0),
        Verdict::le("kolmogorov_band", kolmogorov_band, policy.band_max, 1.0),
        Verdict::le("taylor_band", taylor_band, policy.taylor_band_max, 1.0),
        Verdict::ge("turbulent_taylor_shrink", turbulent_taylor_shrink, policy.shrink_min),
        Verdict::within("gr_slope", gr_slope, SLOPE_TARGETS[0], policy.slope_tol),
        Verdict::within("u_slope", u_slope, SLOPE_TARGETS[1], policy.slope_tol),
        Verdict::within("eps_slope", eps_slope, SLOPE_TARGETS[2], policy.slope_tol),
    ];
    Ok(SweepAnalysis {
        ells,
        gr,
        re,
        u,
        epsilon: eps,
        l_t: col(&|r, _| r.l_t),
        gr_slope,
        u_slope,
        eps_slope,
        gr_span,
        gr_re_band,
        force_band,
        kolmogorov_band,
        taylor_band,
        turbulent_taylor_shrink,
        verdicts,
    })
}
