use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and numerical parameters of one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub nu: f64,
    pub ell0: f64,
    pub theta: f64,
    /// Damping rate α; 0 gives the classical system.
    pub alpha: f64,
    /// Cutoff κ of `P_κ = 1_{|ξ|<κ}`.
    pub kappa: f64,
    /// Mollifier width δ; 0 disables mollification.
    pub delta: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Largest admissible `dt * max(|u_x|+|u_y|+|u_z|) / dx` at any stage.
    pub cfl_max: f64,
}

pub const DEFAULT_CFL_MAX: f64 = 0.5;

impl ModelParams {
    /// `α = ν/ℓ₀²`, `κ = 1/(20θℓ₀)`.
    pub fn damped_default(nu: f64, ell0: f64, theta: f64, dt: f64, t_end: f64) -> Self {
        ModelParams {
            nu,
            ell0,
            theta,
            alpha: nu / (ell0 * ell0),
            kappa: 1.0 / (20.0 * theta * ell0),
            delta: 0.0,
            dt,
            t_end,
            cfl_max: DEFAULT_CFL_MAX,
        }
    }

    /// Decay rate of the L² envelope, `min(2α, νκ²)`.
    pub fn beta(&self) -> f64 {
        (2.0 * self.alpha).min(self.nu * self.kappa * self.kappa)
    }

    /// Diagonal linear rate `ν|ξ|² + α 1_{|ξ|<κ}` from `|ξ|²`.
    #[inline]
    pub fn linear_rate(&self, k2: f64) -> f64 {
        let damp = if k2 < self.kappa * self.kappa {
            self.alpha
        } else {
            0.0
        };
        self.nu * k2 + damp
    }

    /// Number of steps covering `[0, t_end]`.
    pub fn steps(&self) -> u64 {
        if self.t_end <= 0.0 {
            0
        } else {
            (self.t_end / self.dt - 1e-9).ceil() as u64
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(name, format!("must be positive, got {v}")))
            }
        };
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(name, format!("must be nonnegative, got {v}")))
            }
        };
        pos("model.nu", self.nu)?;
        pos("model.ell0", self.ell0)?;
        pos("model.dt", self.dt)?;
        pos("model.cfl_max", self.cfl_max)?;
        pos("model.kappa", self.kappa)?;
        nonneg("model.alpha", self.alpha)?;
        nonneg("model.delta", self.delta)?;
        nonneg("model.t_end", self.t_end)?;
        if !(self.theta >= 1.0) {
            return Err(Error::config("profile.theta", "must be >= 1"));
        }
        Ok(())
    }
}
