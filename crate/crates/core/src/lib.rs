//! Pseudo-spectral simulator and diagnostics for the Navier–Stokes system
//! with frequency-truncation damping `-alpha P_kappa u` on a periodic cube.
//!
//! The crate is organized as the pipeline it runs:
//!
//! * [`spectral`]: grids, Fourier fields, projections, norms, advection.
//! * [`forcing`]: the stationary band-limited lattice force and the
//!   force-derived numbers (γ, L, F, G₀, Gr, Bernstein constants).
//! * [`dynamics`]: integrating-factor time stepping and the energy ledger.
//! * [`diagnostics`]: long-time averages, envelope and dissipation bounds,
//!   theoretical constants, sweep analysis.
//! * [`harness`]: config files, run directories, checkpoints, manifests and
//!   the commands behind the `kolmodamp` binary.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod forcing;
pub mod harness;
pub mod spectral;

pub use error::{Error, Result};
