//! The stationary band-limited lattice force and its derived numbers.

mod lattice;
mod numbers;
mod profile;

pub use lattice::{assemble_force, snapped_modulation, ForceSpec, LatticeMode, DEFAULT_MODULATION};
pub use numbers::{
    build_forcing, calibrate_bernstein, derive_numbers, gradient_linf, laplacian_l2,
    BernsteinConstants, ForceNumbers, Forcing,
};
pub use profile::{annulus, build_profile, bump, check_annulus, ProfileSpec};
