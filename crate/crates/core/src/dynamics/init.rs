use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params::ModelParams;
use crate::spectral::{leray_project, physical_speed, GridSpec, SpectralField, C64, ZERO};

/// Seeded divergence-free field on the modes `max_j |m_j| ≤ m_cut`, scaled
/// to `‖u‖² = energy`.
pub fn random_solenoidal(grid: GridSpec, seed: u64, m_cut: i64, energy: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = grid.len();
    let mut comps: [Vec<C64>; 3] = std::array::from_fn(|_| vec![ZERO; len]);
    for idx in 0..len {
        let (i, j, k) = grid.split(idx);
        let m = [grid.mode(i), grid.mode(j), grid.mode(k)];
        let inside = m.iter().all(|x| x.abs() <= m_cut);
        for c in comps.iter_mut() {
            let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if inside {
                c[idx] = v;
            }
        }
    }
    let mut u = SpectralField::from_components(grid, comps).expect("sized to grid");
    u.mask();
    u.symmetrize();
    let u = leray_project(&u);
    let e = u.l2_sq();
    if e == 0.0 {
        return u;
    }
    u.scale((energy / e).sqrt())
}

/// `max(|u_x|+|u_y|+|u_z|)` of the Stokes response `f/(ν|ξ|² + α 1_{|ξ|<κ})`,
/// the velocity scale used to pick a time step before a run.
pub fn stokes_speed_estimate(f: &SpectralField, params: &ModelParams) -> f64 {
    let s = f.map_modes(|xi, c| {
        let l = params.linear_rate(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        [c[0] / l, c[1] / l, c[2] / l]
    });
    physical_speed(&s)
}
