use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::verdict::Verdict;
use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::forcing::ForceNumbers;

/// Tolerance factor on the passing side of every dissipation bound.
pub const BOUND_TOL: f64 = 1.05;

/// Per-run inequalities between ε, U and the force.
///
/// * `eps_le_forcing_hm1`: `ε ≤ ‖f‖²_Ḣ⁻¹/(νℓ₀³)`
/// * `poincare_u_bound`: `ν (2π/box_len)² U² ℓ₀³ ≤ ‖f‖²_Ḣ⁻¹/ν`
/// * `eps_le_fu`: `ε ≤ F U`
/// * `fu_le_eps`: `F U ≤ (20θ)² ε`
/// * `u2_le_fu_plus_eps`: `(ν/ℓ₀²) U² ≤ F U + (20θ)² ε`
pub fn dissipation_bounds_check(
    epsilon: f64,
    u: f64,
    numbers: &ForceNumbers,
    params: &ModelParams,
    box_len: f64,
) -> Vec<Verdict> {
    let nu = params.nu;
    let l03 = params.ell0.powi(3);
    let fh = numbers.norms.hm1 * numbers.norms.hm1;
    let fu = numbers.f * u;
    let big = (20.0 * params.theta).powi(2);
    let k0 = 2.0 * PI / box_len;
    vec![
        Verdict::le("eps_le_forcing_hm1", epsilon, fh / (nu * l03), BOUND_TOL),
        Verdict::le("poincare_u_bound", nu * k0 * k0 * u * u * l03, fh / nu, BOUND_TOL),
        Verdict::le("eps_le_fu", epsilon, fu, BOUND_TOL),
        Verdict::le("fu_le_eps", fu, big * epsilon, BOUND_TOL),
        Verdict::le(
            "u2_le_fu_plus_eps",
            nu / (params.ell0 * params.ell0) * u * u,
            fu + big * epsilon,
            BOUND_TOL,
        ),
    ]
}

/// Derived turbulence numbers of one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    #[serde(rename = "Re")]
    pub re: f64,
    /// Taylor scale `(νU²/ε)^{1/2}`.
    #[serde(rename = "lT")]
    pub l_t: f64,
    /// `εL/U³`
    pub kolmogorov_ratio: f64,
    /// `Gr/Re²`
    pub gr_re_ratio: f64,
    /// `FL/U²`
    pub force_ratio: f64,
    /// `ℓ_T/ℓ₀`
    pub taylor_ratio: f64,
    /// `ℓ_T √Re / ℓ₀`, order one for K41 turbulence.
    pub k41_taylor: f64,
}

pub fn kolmogorov_and_taylor(
    epsilon: f64,
    u: f64,
    numbers: &ForceNumbers,
    params: &ModelParams,
) -> Result<Ratios> {
    let floor = f64::MIN_POSITIVE / f64::EPSILON;
    if !(u > floor && epsilon > floor && u.is_finite() && epsilon.is_finite()) {
        return Err(Error::DegenerateRun { u, eps: epsilon });
    }
    let nu = params.nu;
    let l = numbers.l;
    let re = u * l / nu;
    let l_t = (nu * u * u / epsilon).sqrt();
    Ok(Ratios {
        re,
        l_t,
        kolmogorov_ratio: epsilon * l / u.powi(3),
        gr_re_ratio: numbers.gr / (re * re),
        force_ratio: numbers.f * l / (u * u),
        taylor_ratio: l_t / params.ell0,
        k41_taylor: l_t * re.sqrt() / params.ell0,
    })
}
