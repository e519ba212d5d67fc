use serde::{Deserialize, Serialize};

use super::lattice::{assemble_force, ForceSpec};
use crate::error::{Error, Result};
use crate::spectral::{reduce::det_max, GridSpec, NormSet, SpectralField, C64};

/// Empirical Bernstein constants of an assembled force.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinConstants {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `c3 < 1/2`.
    pub technical: bool,
    /// `G0 > c0 (1 + sqrt(c3))^2 / c1`.
    pub compat: bool,
}

/// Force-derived scalars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceNumbers {
    pub amplitude: f64,
    pub ell: f64,
    pub c0: f64,
    pub gamma: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G0")]
    pub g0: f64,
    #[serde(rename = "Gr")]
    pub gr: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub technical: bool,
    pub compat: bool,
    pub norms: NormSet,
}

/// `‖f‖_∞ ℓ₀^{3/2} / ‖f‖_2`; γ is this ratio divided by its value `c0` on
/// the single translate.
fn spread_ratio(n: &NormSet, ell0: f64) -> f64 {
    n.linf * ell0.powf(1.5) / n.l2
}

/// `max_x |∇⊗f(x)|` with the Frobenius norm of the 3x3 gradient.
pub fn gradient_linf(f: &SpectralField) -> f64 {
    let grid = *f.grid();
    let mut sq = vec![0.0; grid.len()];
    for j in 0..3 {
        let d = f.map_modes(|xi, c| {
            let w = C64::new(0.0, xi[j]);
            [c[0] * w, c[1] * w, c[2] * w]
        });
        for comp in d.to_physical() {
            for (s, v) in sq.iter_mut().zip(comp) {
                *s += v * v;
            }
        }
    }
    det_max(sq.len(), |i| sq[i]).sqrt()
}

/// `‖Δf‖_2`.
pub fn laplacian_l2(f: &SpectralField) -> f64 {
    f.weighted_energy(|xi| {
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        k2 * k2
    })
    .sqrt()
}

/// Calibrates `c0` on `reference` (the single translate) and measures
/// `c1`, `c2`, `c3` on `force`.
pub fn calibrate_bernstein(
    reference: &SpectralField,
    force: &SpectralField,
    spec: &ForceSpec,
) -> BernsteinConstants {
    let ell0 = spec.ell0;
    let theta = spec.profile.theta;
    let rn = reference.norms();
    let fn_ = force.norms();
    let c0 = spread_ratio(&rn, ell0);
    let gamma = spread_ratio(&fn_, ell0) / c0;
    let l = ell0 / gamma;
    let big_f = fn_.l2 / ell0.powf(1.5);
    let c1 = gradient_linf(force) * l / big_f;
    let c2 = laplacian_l2(force) * theta * theta * gamma * gamma * l * l / (ell0.powf(1.5) * big_f);
    let c3 = c2 / (theta * theta);
    let g0 = fn_.linf * ell0.powi(3) / (spec.nu * spec.nu);
    BernsteinConstants {
        c0,
        c1,
        c2,
        c3,
        technical: c3 < 0.5,
        compat: g0 > c0 * (1.0 + c3.sqrt()).powi(2) / c1,
    }
}

/// γ, L, F, G₀, Gr from the assembled force and calibrated constants.
pub fn derive_numbers(
    f: &SpectralField,
    spec: &ForceSpec,
    consts: &BernsteinConstants,
) -> Result<ForceNumbers> {
    let norms = f.norms();
    let ell0 = spec.ell0;
    let nu2 = spec.nu * spec.nu;
    let gamma = spread_ratio(&norms, ell0) / consts.c0;
    if !(gamma <= 1.0 + 1e-12) {
        return Err(Error::GammaExceedsOne { gamma });
    }
    let l = ell0 / gamma;
    let big_f = norms.l2 / ell0.powf(1.5);
    Ok(ForceNumbers {
        amplitude: spec.amplitude,
        ell: spec.ell,
        c0: consts.c0,
        gamma,
        l,
        f: big_f,
        g0: norms.linf * ell0.powi(3) / nu2,
        gr: big_f * l.powi(3) / nu2,
        c1: consts.c1,
        c2: consts.c2,
        c3: consts.c3,
        technical: consts.technical,
        compat: consts.compat,
        norms,
    })
}

/// Assembled force together with its derived numbers.
pub struct Forcing {
    pub field: SpectralField,
    pub numbers: ForceNumbers,
}

pub fn build_forcing(spec: &ForceSpec, grid: GridSpec) -> Result<Forcing> {
    let field = assemble_force(spec, grid)?;
    let reference = assemble_force(&spec.single_translate(), grid)?;
    let consts = calibrate_bernstein(&reference, &field, spec);
    let numbers = derive_numbers(&field, spec, &consts)?;
    Ok(Forcing { field, numbers })
}
