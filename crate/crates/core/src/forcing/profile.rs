use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField, C64};

/// Shape of the single-translate force profile `phi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    /// Scale separation θ ≥ 1; the profile lives on `1/(10θℓ₀) ≤ |ξ| ≤ 1/(θℓ₀)`.
    pub theta: f64,
    /// Exponent σ of the bump `exp(σ(1 - 1/(1 - t²)))`.
    #[serde(default = "default_sharpness")]
    pub bump_sharpness: f64,
    /// Polarization seed; projected per mode onto the plane normal to ξ.
    #[serde(default = "default_orientation")]
    pub orientation: [f64; 3],
    #[serde(default)]
    pub seed: u64,
}

fn default_sharpness() -> f64 {
    1.0
}

fn default_orientation() -> [f64; 3] {
    [1.0, 1.0, 1.0]
}

impl Default for ProfileSpec {
    fn default() -> Self {
        ProfileSpec {
            theta: 1.0,
            bump_sharpness: default_sharpness(),
            orientation: default_orientation(),
            seed: 0,
        }
    }
}

/// Radial bump on `r ∈ (0.1, 1)`, centered at 0.55, equal to 1 at the center.
pub fn bump(r: f64, sharpness: f64) -> f64 {
    let t = (r - 0.55) / 0.45;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (sharpness * (1.0 - 1.0 / (1.0 - t * t))).exp()
    }
}

/// Inner and outer radius of the forcing annulus.
pub fn annulus(theta: f64, ell0: f64) -> (f64, f64) {
    (1.0 / (10.0 * theta * ell0), 1.0 / (theta * ell0))
}

/// Unnormalized profile coefficients `χ(|ξ|θℓ₀) P_ξ o`. Real and even in ξ,
/// hence Hermitian without symmetrization.
pub(crate) fn raw_profile(spec: &ProfileSpec, grid: GridSpec, ell0: f64) -> SpectralField {
    let s = spec.theta * ell0;
    let on = spec.orientation.iter().map(|x| x * x).sum::<f64>().sqrt();
    let o = spec.orientation.map(|x| x / on);
    let sharp = spec.bump_sharpness;
    SpectralField::from_hermitian_rule(grid, move |_, xi| {
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let chi = bump(k2.sqrt() * s, sharp);
        if chi == 0.0 {
            return [C64::default(); 3];
        }
        let d = (o[0] * xi[0] + o[1] * xi[1] + o[2] * xi[2]) / k2;
        [
            C64::new(chi * (o[0] - d * xi[0]), 0.0),
            C64::new(chi * (o[1] - d * xi[1]), 0.0),
            C64::new(chi * (o[2] - d * xi[2]), 0.0),
        ]
    })
}

pub fn check_annulus(spec: &ProfileSpec, grid: &GridSpec, ell0: f64) -> Result<()> {
    let (lo, hi) = annulus(spec.theta, ell0);
    let shells = grid.shells_in(lo, hi).len();
    if shells < 3 {
        return Err(Error::UnresolvedAnnulus { shells });
    }
    Ok(())
}

/// Single-translate profile `phi(x/(θℓ₀))` scaled to unit sup norm.
pub fn build_profile(spec: &ProfileSpec, grid: GridSpec, ell0: f64) -> Result<SpectralField> {
    check_annulus(spec, &grid, ell0)?;
    let raw = raw_profile(spec, grid, ell0);
    let sup = raw.linf();
    Ok(raw.scale(1.0 / sup))
}
