use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::profile::{build_profile, ProfileSpec};
use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField};

/// Coefficients `λ_k` attached to the lattice translates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeMode {
    /// `λ_k = 1`.
    Uniform,
    /// `λ_k = (1/3) Σ_j cos(q θℓ₀ k_j)`, a plane-wave modulation that keeps the
    /// lattice sum from cancelling inside the block.
    Modulated,
}

/// Force construction inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceSpec {
    pub profile: ProfileSpec,
    pub ell0: f64,
    /// Lattice half-width ℓ: translates `θℓ₀k` with `max_j |θℓ₀ k_j| ≤ ℓ`.
    pub ell: f64,
    /// Amplitude A.
    pub amplitude: f64,
    pub nu: f64,
    pub lattice: LatticeMode,
    /// Modulation wavenumber in units of `1/(θℓ₀)`, snapped to the box.
    pub modulation: f64,
}

pub const DEFAULT_MODULATION: f64 = PI / 4.0;

impl ForceSpec {
    /// Default amplitude `A = ν²/ℓ₀³`.
    pub fn damped_default(profile: ProfileSpec, ell0: f64, ell: f64, nu: f64) -> Self {
        ForceSpec {
            profile,
            ell0,
            ell,
            amplitude: nu * nu / ell0.powi(3),
            nu,
            lattice: LatticeMode::Modulated,
            modulation: DEFAULT_MODULATION,
        }
    }

    pub fn spacing(&self) -> f64 {
        self.profile.theta * self.ell0
    }

    /// Number of lattice steps per half-axis.
    pub fn half_count(&self) -> usize {
        (self.ell / self.spacing() + 1e-9).floor().max(0.0) as usize
    }

    /// The same spec with only the origin translate left.
    pub fn single_translate(&self) -> Self {
        ForceSpec {
            ell: 0.0,
            ..self.clone()
        }
    }
}

/// Modulation wavenumber actually used on `grid`: nearest box mode to
/// `modulation/(θℓ₀)`.
pub fn snapped_modulation(spec: &ForceSpec, grid: &GridSpec) -> f64 {
    let q = spec.modulation / spec.spacing();
    (q / grid.k0()).round() * grid.k0()
}

/// Dirichlet kernel `Σ_{|a|≤J} e^{-iηsa} = 1 + 2 Σ_{a=1}^{J} cos(ηsa)`.
fn dirichlet(eta: f64, s: f64, j: usize) -> f64 {
    let mut acc = 0.0;
    for a in (1..=j).rev() {
        acc += (eta * s * a as f64).cos();
    }
    1.0 + 2.0 * acc
}

/// Lattice phase sum `Σ_k λ_k e^{-iξ·θℓ₀k}` as an even real function of ξ,
/// tabulated per axis.
struct PhaseSum {
    d0: Vec<f64>,
    dq: Vec<f64>,
    mode: LatticeMode,
}

impl PhaseSum {
    fn new(spec: &ForceSpec, grid: &GridSpec) -> Self {
        let s = spec.spacing();
        let j = spec.half_count();
        let q = snapped_modulation(spec, grid);
        let k = grid.axis_wavenumbers();
        let d0 = k.iter().map(|&x| dirichlet(x, s, j)).collect();
        let dq = k
            .iter()
            .map(|&x| 0.5 * (dirichlet(x - q, s, j) + dirichlet(x + q, s, j)))
            .collect();
        PhaseSum {
            d0,
            dq,
            mode: spec.lattice,
        }
    }

    fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        let (a, b, c) = (self.d0[i], self.d0[j], self.d0[k]);
        match self.mode {
            LatticeMode::Uniform => a * b * c,
            LatticeMode::Modulated => {
                (self.dq[i] * b * c + a * self.dq[j] * c + a * b * self.dq[k]) / 3.0
            }
        }
    }
}

/// `f = A Σ_k λ_k φ((x - θℓ₀k)/(θℓ₀))`, assembled in Fourier space.
pub fn assemble_force(spec: &ForceSpec, grid: GridSpec) -> Result<SpectralField> {
    let needed = 2.0 * spec.ell + spec.spacing();
    if needed > grid.box_len * (1.0 + 1e-12) {
        return Err(Error::LatticeOverflow {
            needed,
            box_len: grid.box_len,
        });
    }
    let phi = build_profile(&spec.profile, grid, spec.ell0)?;
    let sum = PhaseSum::new(spec, &grid);
    let a = spec.amplitude;
    Ok(SpectralField::from_hermitian_rule(grid, |idx, _| {
        let (i, j, k) = grid.split(idx);
        let w = a * sum.at(i, j, k);
        let c = phi.coeff(idx);
        [c[0] * w, c[1] * w, c[2] * w]
    }))
}

