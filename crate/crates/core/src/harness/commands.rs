use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::files::{self, FileSink};
use super::manifest::{now, RunManifest};
use crate::diagnostics::{
    diagnose, sweep_analysis, AveragingPolicy, DiagnoseInput, DiagnosticsReport, RunStatus,
    SweepAnalysis, SweepPolicy,
};
use crate::dynamics::{read_field_file, run, write_field_file, FieldFile, ModelParams, RunControl, SimState};
use crate::error::{Error, Result};
use crate::forcing::{build_forcing, ForceNumbers};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_HORIZON: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

/// Run-level facts needed to recompute diagnostics from a ledger.
pub const RUN_RECORD: &str = "run.toml";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub box_len: f64,
    pub c_max: f64,
    pub params: ModelParams,
    pub policy: AveragingPolicy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    VerdictFail,
    InsufficientHorizon,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_OK,
            Status::VerdictFail => EXIT_VERDICT,
            Status::InsufficientHorizon => EXIT_HORIZON,
        }
    }

    fn of(report: &DiagnosticsReport) -> Self {
        if report.status == RunStatus::InsufficientHorizon {
            Status::InsufficientHorizon
        } else if report.passed() {
            Status::Pass
        } else {
            Status::VerdictFail
        }
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::Grid(_)
        | Error::UnresolvedAnnulus { .. }
        | Error::LatticeOverflow { .. }
        | Error::GammaExceedsOne { .. }
        | Error::Io { .. } => EXIT_CONFIG,
        Error::InsufficientHorizon { .. } | Error::InsufficientSweep { .. } => EXIT_HORIZON,
        Error::DigestMismatch(_) | Error::ReportMismatch(_) | Error::Format { .. } => EXIT_MISMATCH,
        Error::GridMismatch
        | Error::NotDivergenceFree { .. }
        | Error::CflViolation { .. }
        | Error::NonFinite { .. }
        | Error::DegenerateRun { .. } => EXIT_SOLVER,
    }
}

pub struct RunOutcome {
    pub dir: PathBuf,
    pub report: DiagnosticsReport,
    pub numbers: ForceNumbers,
    pub status: Status,
}

fn to_toml<T: Serialize>(v: &T) -> String {
    toml::to_string(v).expect("value serializes to toml")
}

fn from_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = files::read_text(path)?;
    toml::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: e.message().to_string(),
    })
}

/// Simulates one configuration into `dir` and writes every artifact.
pub fn cmd_run(cfg: &ExperimentConfig, dir: &Path) -> Result<RunOutcome> {
    let started = now();
    let resolved = cfg.resolve()?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let config_text = cfg.to_text();
    files::write_text(&dir.join(files::CONFIG), &config_text)?;
    let forcing = build_forcing(&resolved.force, resolved.grid)?;
    write_field_file(
        &dir.join(files::FORCE),
        &FieldFile::snapshot("force", 0.0, 0, &forcing.field),
    )?;
    files::write_text(&dir.join(files::FORCE_NUMBERS), &to_toml(&forcing.numbers))?;
    let (u0, params) = resolved.start(cfg, &forcing.field)?;
    let record = RunRecord {
        box_len: resolved.grid.box_len,
        c_max: resolved.c_max,
        params,
        policy: resolved.policy,
    };
    files::write_text(&dir.join(RUN_RECORD), &to_toml(&record))?;
    let control = RunControl {
        snapshot_every: resolved.snapshot_every,
        checkpoint_every: resolved.checkpoint_every,
    };
    let mut sink = FileSink::create(dir)?;
    run(SimState::initial(u0), &forcing.field, &params, control, &mut sink)?;
    finish(dir, &config_text, started)
}

/// Continues the run owning `checkpoint` (or the run in `out`) from that
/// checkpoint. The ledger is cut back to the checkpoint first, so the
/// finished directory matches an uninterrupted run byte for byte.
pub fn cmd_resume(checkpoint: &Path, out: Option<&Path>) -> Result<RunOutcome> {
    let started = now();
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => checkpoint
            .parent()
            .and_then(Path::parent)
            .map(Path::to_path_buf)
            .ok_or_else(|| Error::config("resume", "checkpoint is not inside a run directory"))?,
    };
    let config_text = files::read_text(&dir.join(files::CONFIG))?;
    let cfg = ExperimentConfig::parse(&config_text)?;
    let resolved = cfg.resolve()?;
    let ckpt = read_field_file(checkpoint)?;
    let params = ckpt
        .params
        .ok_or_else(|| Error::config("resume", "file is not a checkpoint"))?;
    let force = read_field_file(&dir.join(files::FORCE))?.field;
    let mut rows = files::read_ledger(&dir.join(files::LEDGER))?;
    let keep = ckpt.step_index as usize + 1;
    if rows.len() < keep {
        return Err(Error::Format {
            path: dir.join(files::LEDGER),
            msg: format!("{} rows, checkpoint needs {keep}", rows.len()),
        });
    }
    rows.truncate(keep);
    files::write_ledger(&dir, &rows)?;
    for stale in [files::REPORT, files::MANIFEST] {
        let _ = fs::remove_file(dir.join(stale));
    }
    let control = RunControl {
        snapshot_every: resolved.snapshot_every,
        checkpoint_every: resolved.checkpoint_every,
    };
    let mut sink = FileSink::append(&dir)?;
    run(ckpt.state(), &force, &params, control, &mut sink)?;
    finish(&dir, &config_text, started)
}

fn finish(dir: &Path, config_text: &str, started: f64) -> Result<RunOutcome> {
    let (report, numbers) = recompute(dir)?;
    files::write_text(&dir.join(files::REPORT), &to_toml(&report))?;
    RunManifest::build(dir, config_text, started)?.write(dir)?;
    Ok(RunOutcome {
        dir: dir.to_path_buf(),
        status: Status::of(&report),
        report,
        numbers,
    })
}

/// Diagnostics from the persisted ledger, force numbers and run record.
pub fn recompute(dir: &Path) -> Result<(DiagnosticsReport, ForceNumbers)> {
    let rows = files::read_ledger(&dir.join(files::LEDGER))?;
    let numbers: ForceNumbers = from_toml(&dir.join(files::FORCE_NUMBERS))?;
    let record: RunRecord = from_toml(&dir.join(RUN_RECORD))?;
    let report = diagnose(
        &rows,
        DiagnoseInput {
            numbers: &numbers,
            params: &record.params,
            policy: &record.policy,
            box_len: record.box_len,
            c_max: record.c_max,
        },
    )?;
    Ok((report, numbers))
}

pub fn point_dir(out: &Path, ell: f64) -> PathBuf {
    out.join(format!("ell_{ell}"))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub analysis: SweepAnalysis,
    /// Points that did not produce a usable report, with the reason.
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.analysis.verdicts.iter().all(|v| v.pass)
    }
}

/// Runs every sweep point, up to `workers` at a time, then aggregates.
pub fn cmd_sweep(cfg: &ExperimentConfig, out: &Path, workers: usize) -> Result<SweepReport> {
    let started = now();
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep.ells", "missing [sweep] section"))?;
    if sweep.ells.len() < crate::diagnostics::MIN_SWEEP_POINTS {
        return Err(Error::InsufficientSweep { have: sweep.ells.len() });
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let config_text = cfg.to_text();
    files::write_text(&out.join(files::CONFIG), &config_text)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config("threads", e.to_string()))?;
    pool.install(|| {
        sweep.ells.par_iter().for_each(|&ell| {
            let dir = point_dir(out, ell);
            if let Err(e) = cmd_run(&cfg.at_ell(ell), &dir) {
                let _ = files::write_text(&dir.join("error.txt"), &format!("{e}\n"));
            }
        })
    });
    let report = aggregate(cfg, out)?;
    files::write_text(&out.join(files::SWEEP_REPORT), &to_toml(&report))?;
    files::write_text(&out.join(files::SWEEP_CSV), &sweep_csv(&report.analysis))?;
    RunManifest::build(out, &config_text, started)?.write(out)?;
    Ok(report)
}

/// Sweep verdicts recomputed from the saved point directories.
pub fn aggregate(cfg: &ExperimentConfig, out: &Path) -> Result<SweepReport> {
    let ells = cfg.sweep.as_ref().map(|s| s.ells.clone()).unwrap_or_default();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for ell in ells {
        let dir = point_dir(out, ell);
        match recompute(&dir) {
            Ok((r, n)) if r.status == RunStatus::Complete => points.push((r, n)),
            Ok(_) => failures.push(format!("ell {ell}: insufficient horizon")),
            Err(e) => {
                let why = files::read_text(&dir.join("error.txt")).unwrap_or_else(|_| e.to_string());
                failures.push(format!("ell {ell}: {}", why.trim()));
            }
        }
    }
    let policy: SweepPolicy = cfg.sweep_policy();
    let analysis = sweep_analysis(&points, &policy)?;
    Ok(SweepReport { analysis, failures })
}

pub const SWEEP_CSV_HEADER: &str = "ell [L],Gr [1],Re [1],U [L T^-1],epsilon [L^2 T^-3],lT [L]";

fn sweep_csv(a: &SweepAnalysis) -> String {
    let mut s = String::from(SWEEP_CSV_HEADER);
    s.push('\n');
    for i in 0..a.ells.len() {
        s.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e}\n",
            a.ells[i], a.gr[i], a.re[i], a.u[i], a.epsilon[i], a.l_t[i]
        ));
    }
    s
}

/// Checks digests, then recomputes diagnostics and compares them with the
/// stored report. Works on run and sweep directories.
pub fn cmd_verify(dir: &Path) -> Result<Status> {
    let manifest = RunManifest::read(dir)?;
    let bad = manifest.check(dir)?;
    if !bad.is_empty() {
        return Err(Error::DigestMismatch(bad.join(", ")));
    }
    if dir.join(files::SWEEP_REPORT).exists() {
        let cfg = ExperimentConfig::parse(&files::read_text(&dir.join(files::CONFIG))?)?;
        let mut worst = Status::Pass;
        for ell in cfg.sweep.as_ref().map(|s| s.ells.clone()).unwrap_or_default() {
            let p = point_dir(dir, ell);
            if p.join(files::MANIFEST).exists() {
                if cmd_verify(&p)? != Status::Pass {
                    worst = Status::VerdictFail;
                }
            }
        }
        let stored: SweepReport = from_toml(&dir.join(files::SWEEP_REPORT))?;
        let fresh = aggregate(&cfg, dir)?;
        let diffs = super::compare::diff_sweep(&stored, &fresh);
        if !diffs.is_empty() {
            return Err(Error::ReportMismatch(diffs));
        }
        if !fresh.passed() {
            worst = Status::VerdictFail;
        }
        return Ok(worst);
    }
    let stored: DiagnosticsReport = from_toml(&dir.join(files::REPORT))?;
    let (fresh, _) = recompute(dir)?;
    let diffs = super::compare::diff_reports(&stored, &fresh);
    if !diffs.is_empty() {
        return Err(Error::ReportMismatch(diffs));
    }
    Ok(Status::of(&fresh))
}

/// What `report` found in a directory.
pub enum Summary {
    Run(Box<DiagnosticsReport>, ForceNumbers),
    Sweep(Box<SweepReport>),
}

/// Re-derives the report of a run or sweep directory without simulating.
pub fn cmd_report(dir: &Path) -> Result<Summary> {
    if dir.join(RUN_RECORD).exists() {
        let (r, n) = recompute(dir)?;
        return Ok(Summary::Run(Box::new(r), n));
    }
    let cfg = ExperimentConfig::parse(&files::read_text(&dir.join(files::CONFIG))?)?;
    Ok(Summary::Sweep(Box::new(aggregate(&cfg, dir)?)))
}
