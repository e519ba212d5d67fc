use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::spectral::{advect, Modes, SpectralField, C64};

/// Velocity at a time level.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub u: SpectralField,
    pub step_index: u64,
}

impl SimState {
    pub fn initial(u: SpectralField) -> Self {
        SimState {
            t: 0.0,
            u,
            step_index: 0,
        }
    }
}

/// Kinetic-energy budget terms of one state, plus the time derivative of
/// the net power used by the ledger quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub kinetic: f64,
    pub dissipation: f64,
    pub injection: f64,
    pub damping: f64,
    /// `d/dt (injection - dissipation - damping)`.
    pub rate_slope: f64,
}

impl Budget {
    pub fn rate(&self) -> f64 {
        self.injection - self.dissipation - self.damping
    }
}

/// `-P((v.grad)u)` at a state, with the advected speed used for the CFL test.
struct Tendency {
    n: SpectralField,
    max_speed: f64,
}

/// Lawson-type RK4 under the integrating factor `exp(-(ν|ξ|² + α 1_{|ξ|<κ}) t)`.
///
/// The scheme advances the deviation `w = u - u_s` from the Stokes response
/// `u_s = f/(ν|ξ|² + α 1_{|ξ|<κ})`, so the linear operator and the stationary
/// force are both integrated in closed form and only the advection term goes
/// through the Runge–Kutta stages.
pub struct Stepper {
    params: ModelParams,
    f: SpectralField,
    stokes: SpectralField,
    rate: Vec<f64>,
    e_full: Vec<f64>,
    e_half: Vec<f64>,
    modes: std::sync::Arc<Modes>,
}

impl Stepper {
    pub fn new(f: &SpectralField, params: &ModelParams) -> Self {
        let grid = *f.grid();
        let modes = Modes::new(&grid);
        let rate: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let xi = modes.xi(idx);
                params.linear_rate(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])
            })
            .collect();
        let h = params.dt;
        let e_full = rate.par_iter().map(|l| (-l * h).exp()).collect();
        let e_half = rate.par_iter().map(|l| (-l * h * 0.5).exp()).collect();
        let stokes = SpectralField::from_hermitian_rule(grid, |idx, _| {
            let c = f.coeff(idx);
            let l = rate[idx];
            [c[0] / l, c[1] / l, c[2] / l]
        });
        Stepper {
            params: *params,
            f: f.clone(),
            stokes,
            rate,
            e_full,
            e_half,
            modes,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn force(&self) -> &SpectralField {
        &self.f
    }

    fn tendency(&self, u: &SpectralField, step: u64) -> Result<Tendency> {
        let delta = (self.params.delta > 0.0).then_some(self.params.delta);
        let adv = advect(u, delta)?;
        let cfl = self.params.dt * adv.max_speed / u.grid().dx();
        if !cfl.is_finite() {
            return Err(Error::NonFinite { step });
        }
        if cfl > self.params.cfl_max {
            return Err(Error::CflViolation {
                step,
                cfl,
                limit: self.params.cfl_max,
            });
        }
        Ok(Tendency {
            n: adv.term.scale(-1.0),
            max_speed: adv.max_speed,
        })
    }

    /// Per-mode `out = a(idx) * x + b(idx) * y + s` over up to three inputs.
    fn combine<F>(&self, f: F) -> SpectralField
    where
        F: Fn(usize, usize) -> C64 + Sync,
    {
        let grid = *self.f.grid();
        let mut out = SpectralField::zeros(grid);
        for (a, comp) in out.components_mut().iter_mut().enumerate() {
            comp.par_iter_mut().enumerate().for_each(|(idx, v)| {
                if self.modes.retained(idx) {
                    *v = f(a, idx);
                }
            });
        }
        out
    }

    /// Advances one step. `k1` may carry the tendency at `state` already
    /// computed by the caller.
    fn advance(&self, state: &SimState, k1: Option<&SpectralField>) -> Result<SimState> {
        let h = self.params.dt;
        let step = state.step_index + 1;
        let u0 = &state.u;
        let us = &self.stokes;
        let owned;
        let k1 = match k1 {
            Some(k) => k,
            None => {
                owned = self.tendency(u0, step)?.n;
                &owned
            }
        };
        let (e, e2) = (&self.e_full, &self.e_half);
        let w0 = |a: usize, i: usize| u0.component(a)[i] - us.component(a)[i];

        let ua = self.combine(|a, i| {
            (w0(a, i) + k1.component(a)[i] * (0.5 * h)) * e2[i] + us.component(a)[i]
        });
        let k2 = self.tendency(&ua, step)?.n;
        drop(ua);
        let ub = self.combine(|a, i| {
            w0(a, i) * e2[i] + k2.component(a)[i] * (0.5 * h) + us.component(a)[i]
        });
        let k3 = self.tendency(&ub, step)?.n;
        drop(ub);
        let uc = self.combine(|a, i| {
            w0(a, i) * e[i] + k3.component(a)[i] * (h * e2[i]) + us.component(a)[i]
        });
        let k4 = self.tendency(&uc, step)?.n;
        drop(uc);
        let u1 = self.combine(|a, i| {
            let s = k1.component(a)[i] * e[i]
                + (k2.component(a)[i] + k3.component(a)[i]) * (2.0 * e2[i])
                + k4.component(a)[i];
            w0(a, i) * e[i] + s * (h / 6.0) + us.component(a)[i]
        });
        if !u1.is_finite() {
            return Err(Error::NonFinite { step });
        }
        Ok(SimState {
            t: step as f64 * h,
            u: u1,
            step_index: step,
        })
    }

    pub fn step(&self, state: &SimState) -> Result<SimState> {
        self.advance(state, None)
    }

    /// Budget of `u` using its tendency `n = -P((v.grad)u)`.
    fn budget_with(&self, u: &SpectralField, n: &SpectralField) -> Budget {
        let p = &self.params;
        let kappa2 = p.kappa * p.kappa;
        let vol = u.grid().volume();
        let modes = &self.modes;
        let f = &self.f;
        let sum = |g: &(dyn Fn(usize) -> f64 + Sync)| {
            crate::spectral::reduce::det_sum(u.grid().len(), |i| {
                if modes.retained(i) {
                    g(i)
                } else {
                    0.0
                }
            }) * vol
        };
        let e2 = |i: usize| {
            let c = u.coeff(i);
            c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()
        };
        let k2 = |i: usize| {
            let xi = modes.xi(i);
            xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
        };
        let kinetic = sum(&e2);
        let dissipation = 2.0 * p.nu * sum(&|i| k2(i) * e2(i));
        let injection = 2.0
            * sum(&|i| {
                let (a, b) = (f.coeff(i), u.coeff(i));
                (0..3).map(|q| (a[q].conj() * b[q]).re).sum::<f64>()
            });
        let damping = if p.alpha > 0.0 {
            2.0 * p.alpha * sum(&|i| if k2(i) < kappa2 { e2(i) } else { 0.0 })
        } else {
            0.0
        };
        // u_t = -rate u + f + n; d/dt r = 2 <u_t, f - 2 rate u>
        let rate_slope = 2.0
            * sum(&|i| {
                let (fc, uc, nc) = (f.coeff(i), u.coeff(i), n.coeff(i));
                let l = self.rate[i];
                (0..3)
                    .map(|q| {
                        let ut = fc[q] + nc[q] - uc[q] * l;
                        let w = fc[q] - uc[q] * (2.0 * l);
                        (ut.conj() * w).re
                    })
                    .sum::<f64>()
            });
        Budget {
            kinetic,
            dissipation,
            injection,
            damping,
            rate_slope,
        }
    }

    /// Budget of `u` and the tendency at `u` for reuse as the next `k1`.
    pub fn probe(&self, state: &SimState) -> Result<(Budget, SpectralField, f64)> {
        let t = self.tendency(&state.u, state.step_index + 1)?;
        let b = self.budget_with(&state.u, &t.n);
        Ok((b, t.n, t.max_speed))
    }

    pub fn budget(&self, state: &SimState) -> Result<Budget> {
        Ok(self.probe(state)?.0)
    }

    /// Steps with the first-stage tendency supplied by the caller.
    pub fn step_with(&self, state: &SimState, k1: &SpectralField) -> Result<SimState> {
        self.advance(state, Some(k1))
    }
}

/// One step of the damped system; `params.delta > 0` selects mollified advection.
pub fn step(state: &SimState, f: &SpectralField, params: &ModelParams) -> Result<SimState> {
    Stepper::new(f, params).step(state)
}

/// One step with the advecting velocity replaced by `φ_δ * u`.
pub fn step_mollified(
    state: &SimState,
    f: &SpectralField,
    params: &ModelParams,
) -> Result<SimState> {
    if !(params.delta > 0.0) {
        return Err(Error::config("model.delta", "mollified step needs delta > 0"));
    }
    Stepper::new(f, params).step(state)
}

/// Largest stage-free CFL number of a state, `dt max(|u_x|+|u_y|+|u_z|)/dx`.
pub fn cfl_number(u: &SpectralField, dt: f64) -> f64 {
    dt * crate::spectral::physical_speed(u) / u.grid().dx()
}
