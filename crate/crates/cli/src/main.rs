//! `kolmodamp run|sweep|verify|report`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kolmodamp::harness::{
    cmd_report, cmd_resume, cmd_run, cmd_sweep, cmd_verify, error_exit_code, preset,
    ExperimentConfig, Status, Summary, EXIT_CONFIG,
};
use kolmodamp::{Error, Result};

#[derive(Parser)]
#[command(name = "kolmodamp", version, about = "Damped Navier-Stokes desk experiments")]
struct Cli {
    /// Worker threads; falls back to KOLMODAMP_THREADS, then all cores.
    #[arg(long, global = true, env = "KOLMODAMP_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate one configuration.
    Run {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue from a checkpoint file instead of starting fresh.
        #[arg(long, conflicts_with_all = ["config", "preset"])]
        resume: Option<PathBuf>,
    },
    /// Run every point of the [sweep] list and aggregate.
    Sweep {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check digests and recompute verdicts of a run or sweep directory.
    Verify {
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the diagnostics of a run or sweep directory.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Source {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
}

impl Source {
    fn load(&self) -> Result<ExperimentConfig> {
        match (&self.config, &self.preset) {
            (Some(p), None) => ExperimentConfig::load(p),
            (None, Some(name)) => preset(name),
            (None, None) => Err(Error::Config {
                field: "config".into(),
                msg: "pass --config PATH or --preset NAME".into(),
            }),
            (Some(_), Some(_)) => Err(Error::Config {
                field: "config".into(),
                msg: "--config and --preset are exclusive".into(),
            }),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or(0);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    match dispatch(cli.cmd, rayon::current_num_threads()) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}

fn dispatch(cmd: Cmd, threads: usize) -> Result<Status> {
    match cmd {
        Cmd::Run { src, out, resume } => {
            let outcome = match resume {
                Some(ckpt) => cmd_resume(&ckpt, out.as_deref())?,
                None => {
                    let cfg = src.load()?;
                    let out = out.unwrap_or_else(|| PathBuf::from("run"));
                    cmd_run(&cfg, &out)?
                }
            };
            print_run(&outcome.dir, &outcome.report);
            Ok(outcome.status)
        }
        Cmd::Sweep { src, out } => {
            let cfg = src.load()?;
            let report = cmd_sweep(&cfg, &out, threads)?;
            print_sweep(&report);
            Ok(if report.passed() { Status::Pass } else { Status::VerdictFail })
        }
        Cmd::Verify { out } => {
            let status = cmd_verify(&out)?;
            println!("{}: digests and report match ({status:?})", out.display());
            Ok(status)
        }
        Cmd::Report { out } => match cmd_report(&out)? {
            Summary::Run(r, _) => {
                print_run(&out, &r);
                Ok(if r.passed() { Status::Pass } else { Status::VerdictFail })
            }
            Summary::Sweep(s) => {
                print_sweep(&s);
                Ok(if s.passed() { Status::Pass } else { Status::VerdictFail })
            }
        },
    }
}

fn print_run(dir: &Path, r: &kolmodamp::diagnostics::DiagnosticsReport) {
    println!("{} ({:?}, t_end {:.6e}, {} rows)", dir.display(), r.status, r.t_end, r.rows);
    println!("  epsilon {:.6e}  U {:.6e}  Re {:.6e}  lT {:.6e}", r.epsilon, r.u, r.re, r.l_t);
    println!(
        "  eps L/U^3 {:.4e}  Gr/Re^2 {:.4e}  lT/l0 {:.4e}  envelope_c {:.4e}",
        r.kolmogorov_ratio, r.gr_re_ratio, r.taylor_ratio, r.envelope_c
    );
    for v in &r.verdicts {
        println!(
            "  {:<4} {:<22} {:.6e} <= {:.6e}",
            if v.pass { "pass" } else { "FAIL" },
            v.name,
            v.lhs,
            v.rhs
        );
    }
}

fn print_sweep(s: &kolmodamp::harness::SweepReport) {
    let a = &s.analysis;
    println!("ell          Gr           Re           U            epsilon      lT");
    for i in 0..a.ells.len() {
        println!(
            "{:<12.4e} {:<12.4e} {:<12.4e} {:<12.4e} {:<12.4e} {:<12.4e}",
            a.ells[i], a.gr[i], a.re[i], a.u[i], a.epsilon[i], a.l_t[i]
        );
    }
    for f in &s.failures {
        println!("  point failed: {f}");
    }
    for v in &a.verdicts {
        println!(
            "  {:<4} {:<24} lhs {:.6e} rhs {:.6e}",
            if v.pass { "pass" } else { "FAIL" },
            v.name,
            v.lhs,
            v.rhs
        );
    }
}
