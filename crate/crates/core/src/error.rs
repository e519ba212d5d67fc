use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid: {0}")]
    Grid(String),
    #[error("grid mismatch between fields")]
    GridMismatch,
    #[error("input is not divergence-free (max |xi.c|/|c| = {ratio:e}, tol {tol:e})")]
    NotDivergenceFree { ratio: f64, tol: f64 },
    #[error("forcing annulus resolved by only {shells} spectral shells (need 3)")]
    UnresolvedAnnulus { shells: usize },
    #[error("force lattice overflows the box: 2*ell + theta*ell0 = {needed} > box_len = {box_len}")]
    LatticeOverflow { needed: f64, box_len: f64 },
    #[error("gamma = {gamma} exceeds 1; c0 is miscalibrated")]
    GammaExceedsOne { gamma: f64 },
    #[error("CFL violation at step {step}: cfl = {cfl:.4} exceeds budget {limit}")]
    CflViolation { step: u64, cfl: f64, limit: f64 },
    #[error("non-finite coefficient at step {step}")]
    NonFinite { step: u64 },
    #[error("run too short for averaging: have {have}, need burn_in + 3*window = {need}")]
    InsufficientHorizon { have: f64, need: f64 },
    #[error("degenerate run: U = {u:e}, epsilon = {eps:e}")]
    DegenerateRun { u: f64, eps: f64 },
    #[error("sweep needs at least 4 completed runs, have {have}")]
    InsufficientSweep { have: usize },
    #[error("config field `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("digest mismatch: {0}")]
    DigestMismatch(String),
    #[error("stored report differs from recomputation: {}", .0.join("; "))]
    ReportMismatch(Vec<String>),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(field: &str, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
