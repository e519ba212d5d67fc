//! Fourier representation of periodic vector fields.

mod fft;
mod field;
mod grid;
mod nonlinear;
mod ops;
pub mod reduce;

pub use fft::Fft3;
pub use field::{Modes, NormSet, SpectralField, C64, TOL_DIV, TOL_ENERGY, ZERO};
pub use grid::GridSpec;
pub use nonlinear::{
    advect, check_divergence_free, nonlinear_term, nonlinear_term_mollified, Advection,
};
pub use ops::{band_pass, leray_mode, leray_project, low_pass, norms};

pub use nonlinear::physical_speed;
