//! Experiment configuration.
//!
//! Files are a flat subset of TOML: top-level `key = value` pairs followed by
//! `[section]` blocks of `key = value` pairs. Values are numbers, quoted
//! strings, booleans or flat arrays of numbers. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{AveragingPolicy, SweepPolicy, DEFAULT_C_MAX};
use crate::dynamics::{random_solenoidal, stokes_speed_estimate, ModelParams, DEFAULT_CFL_MAX};
use crate::error::{Error, Result};
use crate::forcing::{ForceSpec, LatticeMode, ProfileSpec, DEFAULT_MODULATION};
use crate::spectral::{GridSpec, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `α = ν/ℓ₀²`, `κ = 1/(20θℓ₀)`; overrides are rejected.
    DampedDefault,
    /// α and κ taken from the config, damped-default values where absent.
    DampedCustom,
    /// `α = 0`.
    Classical,
    /// Damped with a mollified advecting velocity, `δ > 0` required.
    Mollified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Initial {
    Zero,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub box_len: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dealias_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub nu: f64,
    pub ell0: f64,
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Fixed step. When absent, `dt = cfl_target dx / speed` with the larger
    /// of the Stokes-response speed and the initial speed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl_target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl_max: Option<f64>,
    /// Defaults to the averaging horizon `burn_in + 3 window`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSection {
    pub ell: f64,
    /// `A = amplitude_scale ν²/ℓ₀³`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulation: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bump_sharpness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AveragingSection {
    /// Defaults to `5/β`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<f64>,
    /// Defaults to `1/β`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_max: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Initial>,
    /// Energy of a random start as a multiple of the Stokes-response energy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_ratio: Option<f64>,
    /// Largest integer wavenumber component of a random start.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_mode: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IoSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint_every: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub ells: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor_band_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSection,
    pub model: ModelSection,
    pub force: ForceSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub profile: ProfileSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub initial: InitialSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub averaging: AveragingSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub io: IoSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

pub const DEFAULT_CFL_TARGET: f64 = 0.4;
pub const DEFAULT_ENERGY_RATIO: f64 = 25.0;
pub const DEFAULT_MAX_MODE: i64 = 3;

/// A config with every default filled in, ready to run.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub grid: GridSpec,
    pub params: ModelParams,
    pub force: ForceSpec,
    pub policy: AveragingPolicy,
    pub c_max: f64,
    pub initial: Initial,
    pub energy_ratio: f64,
    pub max_mode: i64,
    pub seed: u64,
    pub snapshot_every: u64,
    pub checkpoint_every: u64,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config {
            field: e
                .span()
                .map(|s| text[..s.start].lines().count().to_string())
                .map(|l| format!("line {l}"))
                .unwrap_or_else(|| "file".into()),
            msg: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The config with the force scale `ell` replaced and no sweep list.
    pub fn at_ell(&self, ell: f64) -> Self {
        let mut c = self.clone();
        c.force.ell = ell;
        c.sweep = None;
        c
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        match self.mode {
            Mode::DampedDefault => {
                for (name, v) in [("model.alpha", m.alpha), ("model.kappa", m.kappa), ("model.delta", m.delta)] {
                    if v.is_some() {
                        return Err(Error::config(name, "not allowed in damped-default mode"));
                    }
                }
            }
            Mode::Classical => {
                if m.alpha.is_some_and(|a| a != 0.0) {
                    return Err(Error::config("model.alpha", "must be 0 or absent in classical mode"));
                }
                if m.delta.is_some() {
                    return Err(Error::config("model.delta", "not allowed in classical mode"));
                }
            }
            Mode::Mollified => {
                if !m.delta.is_some_and(|d| d > 0.0) {
                    return Err(Error::config("model.delta", "mollified mode needs delta > 0"));
                }
            }
            Mode::DampedCustom => {
                if m.delta.is_some() {
                    return Err(Error::config("model.delta", "use mollified mode for delta"));
                }
            }
        }
        if let Some(s) = &self.sweep {
            if s.ells.is_empty() {
                return Err(Error::config("sweep.ells", "empty list"));
            }
            for &ell in &s.ells {
                self.at_ell(ell).resolve()?;
            }
        }
        self.resolve().map(|_| ())
    }

    /// Fills defaults and checks cross-field constraints: the box must tile
    /// with the lattice spacing and the profile cell, i.e. `ell` and `θℓ₀`
    /// divide `box_len/2`.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let g = &self.grid;
        let mut grid = GridSpec::new(g.n, g.box_len)?;
        if let Some(d) = g.dealias_fraction {
            grid.dealias_fraction = d;
        }
        grid.validate()?;
        let m = &self.model;
        let mut params = ModelParams::damped_default(m.nu, m.ell0, m.theta, 1.0, 0.0);
        match self.mode {
            Mode::DampedDefault => {}
            Mode::DampedCustom | Mode::Mollified => {
                params.alpha = m.alpha.unwrap_or(params.alpha);
                params.kappa = m.kappa.unwrap_or(params.kappa);
                params.delta = m.delta.unwrap_or(0.0);
            }
            Mode::Classical => {
                params.alpha = 0.0;
                params.kappa = m.kappa.unwrap_or(params.kappa);
            }
        }
        params.cfl_max = m.cfl_max.unwrap_or(DEFAULT_CFL_MAX);
        for (name, v) in [("model.nu", m.nu), ("model.ell0", m.ell0), ("model.theta", m.theta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, format!("must be positive, got {v}")));
            }
        }
        let half = g.box_len / 2.0;
        let divides = |name: &str, x: f64| {
            let q = half / x;
            if x > 0.0 && (q - q.round()).abs() < 1e-9 && q.round() >= 1.0 {
                Ok(())
            } else {
                Err(Error::config(name, format!("{x} must divide box_len/2 = {half}")))
            }
        };
        divides("model.theta", m.theta * m.ell0)?;
        divides("force.ell", self.force.ell)?;

        let mut profile = ProfileSpec {
            theta: m.theta,
            seed: self.seed,
            ..ProfileSpec::default()
        };
        if let Some(s) = self.profile.bump_sharpness {
            profile.bump_sharpness = s;
        }
        if let Some(o) = self.profile.orientation {
            profile.orientation = o;
        }
        let mut force = ForceSpec::damped_default(profile, m.ell0, self.force.ell, m.nu);
        force.amplitude *= self.force.amplitude_scale.unwrap_or(1.0);
        force.lattice = self.force.lattice.unwrap_or(LatticeMode::Modulated);
        force.modulation = self.force.modulation.unwrap_or(DEFAULT_MODULATION);

        // averaging defaults follow the damped-default β even when α or κ differ
        let beta_ref = ModelParams::damped_default(m.nu, m.ell0, m.theta, 1.0, 0.0).beta();
        let a = &self.averaging;
        let policy = AveragingPolicy {
            burn_in: a.burn_in.unwrap_or(5.0 / beta_ref),
            window: a.window.unwrap_or(1.0 / beta_ref),
            stride: a.stride.unwrap_or(1),
        };
        if !(policy.window > 0.0 && policy.burn_in >= 0.0) {
            return Err(Error::config("averaging.window", "window must be positive and burn_in nonnegative"));
        }
        params.t_end = m.t_end.unwrap_or(policy.horizon());
        params.dt = m.dt.unwrap_or(1.0);
        let cfl_target = m.cfl_target.unwrap_or(DEFAULT_CFL_TARGET);
        if !(cfl_target > 0.0 && cfl_target <= params.cfl_max) {
            return Err(Error::config("model.cfl_target", format!("must lie in (0, cfl_max = {}]", params.cfl_max)));
        }
        params.validate()?;
        let init = &self.initial;
        Ok(ResolvedRun {
            grid,
            params,
            force,
            policy,
            c_max: a.c_max.unwrap_or(DEFAULT_C_MAX),
            initial: init.kind.unwrap_or(Initial::Zero),
            energy_ratio: init.energy_ratio.unwrap_or(DEFAULT_ENERGY_RATIO),
            max_mode: init.max_mode.unwrap_or(DEFAULT_MAX_MODE),
            seed: self.seed,
            snapshot_every: self.io.snapshot_every.unwrap_or(0),
            checkpoint_every: self.io.checkpoint_every.unwrap_or(0),
        })
    }

    pub fn cfl_target(&self) -> f64 {
        self.model.cfl_target.unwrap_or(DEFAULT_CFL_TARGET)
    }

    pub fn sweep_policy(&self) -> SweepPolicy {
        let mut p = SweepPolicy::default();
        if let Some(s) = &self.sweep {
            p.band_max = s.band_max.unwrap_or(p.band_max);
            p.taylor_band_max = s.taylor_band_max.unwrap_or(p.taylor_band_max);
        }
        p
    }
}

impl ResolvedRun {
    /// Initial velocity and the time step: the configured `dt`, or
    /// `cfl_target dx / max(Stokes speed, initial speed)`.
    pub fn start(&self, cfg: &ExperimentConfig, f: &SpectralField) -> Result<(SpectralField, ModelParams)> {
        let mut params = self.params;
        let u0 = match self.initial {
            Initial::Zero => SpectralField::zeros(self.grid),
            Initial::Random => {
                let stokes = f.map_modes(|xi, c| {
                    let l = params.linear_rate(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
                    [c[0] / l, c[1] / l, c[2] / l]
                });
                let energy = self.energy_ratio * stokes.l2_sq();
                random_solenoidal(self.grid, self.seed, self.max_mode, energy)
            }
        };
        if cfg.model.dt.is_none() {
            let speed = stokes_speed_estimate(f, &params).max(crate::spectral::physical_speed(&u0));
            if !(speed > 0.0 && speed.is_finite()) {
                return Err(Error::config("model.dt", "zero force and zero start: set dt explicitly"));
            }
            params.dt = cfg.cfl_target() * self.grid.dx() / speed;
        }
        params.validate()?;
        Ok((u0, params))
    }
}
