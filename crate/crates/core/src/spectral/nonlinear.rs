use rayon::prelude::*;

use super::field::{forward_pair, inverse_pair, Modes, SpectralField, C64, TOL_DIV, ZERO};
use super::ops::leray_mode;
use super::reduce::det_max;
use crate::error::{Error, Result};

/// Output of one advection evaluation.
pub struct Advection {
    /// `P((v . grad) u)` with `v = u` or its mollified copy.
    pub term: SpectralField,
    /// `max_x (|u_x| + |u_y| + |u_z|)` of the advected field on the grid.
    pub max_speed: f64,
}

/// `P((u . grad) u)` evaluated pseudo-spectrally in divergence form
/// `d_j(u_i u_j)`, then truncated to the dealiased cube and Leray-projected.
pub fn nonlinear_term(u: &SpectralField) -> Result<SpectralField> {
    Ok(advect(u, None)?.term)
}

/// `P(((phi_delta * u) . grad) u)` with the Gaussian multiplier
/// `exp(-delta^2 |xi|^2 / 2)` on the advecting velocity.
pub fn nonlinear_term_mollified(u: &SpectralField, delta: f64) -> Result<SpectralField> {
    Ok(advect(u, Some(delta))?.term)
}

pub fn check_divergence_free(u: &SpectralField) -> Result<()> {
    let ratio = u.max_divergence_ratio();
    if ratio > TOL_DIV {
        return Err(Error::NotDivergenceFree {
            ratio,
            tol: TOL_DIV,
        });
    }
    Ok(())
}

pub fn advect(u: &SpectralField, delta: Option<f64>) -> Result<Advection> {
    check_divergence_free(u)?;
    let grid = *u.grid();
    let modes = Modes::new(&grid);
    let [ux, uy, uz] = u.to_physical();
    let max_speed = det_max(ux.len(), |i| ux[i].abs() + uy[i].abs() + uz[i].abs());

    // t[i][j] holds the spectrum of v_j u_i.
    let t: [[Vec<C64>; 3]; 3] = match delta.filter(|d| *d > 0.0) {
        None => {
            let (xx, yy) = products(&grid, (&ux, &ux), (&uy, &uy));
            let (zz, xy) = products(&grid, (&uz, &uz), (&ux, &uy));
            let (xz, yz) = products(&grid, (&ux, &uz), (&uy, &uz));
            [
                [xx, xy.clone(), xz.clone()],
                [xy, yy, yz.clone()],
                [xz, yz, zz],
            ]
        }
        Some(d) => {
            let v = u.map_modes(|xi, c| {
                let g = (-0.5 * d * d * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])).exp();
                [c[0] * g, c[1] * g, c[2] * g]
            });
            let [vx, vy, vz] = v.to_physical();
            let us = [&ux, &uy, &uz];
            let vs = [&vx, &vy, &vz];
            let mut out: [[Vec<C64>; 3]; 3] = Default::default();
            let pairs: Vec<(usize, usize)> =
                (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
            for chunk in pairs.chunks(2) {
                let (i0, j0) = chunk[0];
                if chunk.len() == 2 {
                    let (i1, j1) = chunk[1];
                    let (a, b) = products(&grid, (us[i0], vs[j0]), (us[i1], vs[j1]));
                    out[i0][j0] = a;
                    out[i1][j1] = b;
                } else {
                    let prod: Vec<f64> = us[i0].iter().zip(vs[j0].iter()).map(|(a, b)| a * b).collect();
                    out[i0][j0] = forward_pair(&grid, &prod, None).0;
                }
            }
            out
        }
    };

    let term = SpectralField::from_hermitian_rule(grid, |idx, xi| {
        if !modes.retained(idx) {
            return [ZERO; 3];
        }
        // i xi_j T_ij
        let mut d = [ZERO; 3];
        for (i, di) in d.iter_mut().enumerate() {
            let s = t[i][0][idx] * xi[0] + t[i][1][idx] * xi[1] + t[i][2][idx] * xi[2];
            *di = C64::new(-s.im, s.re);
        }
        leray_mode(xi, d)
    });
    Ok(Advection { term, max_speed })
}

fn products(
    grid: &super::grid::GridSpec,
    p: (&Vec<f64>, &Vec<f64>),
    q: (&Vec<f64>, &Vec<f64>),
) -> (Vec<C64>, Vec<C64>) {
    let a: Vec<f64> = p.0.par_iter().zip(p.1.par_iter()).map(|(x, y)| x * y).collect();
    let b: Vec<f64> = q.0.par_iter().zip(q.1.par_iter()).map(|(x, y)| x * y).collect();
    forward_pair(grid, &a, Some(&b))
}

/// `max_x (|u_x| + |u_y| + |u_z|)` on the grid.
pub fn physical_speed(u: &SpectralField) -> f64 {
    let (x, y) = inverse_pair(u.grid(), u.component(0), Some(u.component(1)));
    let (z, _) = inverse_pair(u.grid(), u.component(2), None);
    det_max(x.len(), |i| x[i].abs() + y[i].abs() + z[i].abs())
}
