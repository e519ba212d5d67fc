//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. A trailing argument filters criteria by name.

mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use kolmodamp::diagnostics::{
    a1, a2, cumulative_energy_violation, fit, theoretical_constants, DiagnosticsReport,
};
use kolmodamp::dynamics::*;
use kolmodamp::forcing::{annulus, build_forcing, ForceNumbers, ForceSpec, ProfileSpec};
use kolmodamp::harness::*;
use kolmodamp::spectral::*;
use kolmodamp::Error;

type Outcome = std::result::Result<String, String>;

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within_budget(name: &str, start: Instant, budget: Duration) -> std::result::Result<(), String> {
    let spent = start.elapsed();
    if spent > budget {
        Err(format!("{name} took {spent:.1?}, budget {budget:?}"))
    } else {
        Ok(())
    }
}

fn grid(n: usize, box_len: f64) -> GridSpec {
    GridSpec::new(n, box_len).unwrap()
}

fn spectral_correctness() -> Outcome {
    let start = Instant::now();
    let g = grid(16, 2.0 * PI);

    let mut worst_idem: f64 = 0.0;
    let mut worst_adj: f64 = 0.0;
    for seed in 0..20u64 {
        let v = random_field(g, seed);
        let w = random_field(g, 500 + seed);
        let pv = leray_project(&v);
        worst_idem = worst_idem.max(max_coeff_diff(&leray_project(&pv), &pv));
        let lhs = pv.inner(&w);
        let rhs = v.inner(&leray_project(&w));
        worst_adj = worst_adj.max((lhs - rhs).abs() / (v.l2_sq() * w.l2_sq()).sqrt());
        check!(pv.l2_sq() <= v.l2_sq() * (1.0 + 1e-14), "leray increased energy, seed {seed}");
        check!(pv.max_divergence_ratio() < TOL_DIV, "leray output divergent, seed {seed}");
    }
    check!(worst_idem < 1e-15 && worst_adj < 1e-14, "leray idempotence {worst_idem:e} adjointness {worst_adj:e}");

    let mut worst_split: f64 = 0.0;
    for seed in 0..100u64 {
        let v = random_field(g, 1000 + seed);
        let kappa = 0.5 + 0.06 * seed as f64;
        let lo = low_pass(&v, kappa);
        check!(low_pass(&lo, kappa) == lo, "low_pass not idempotent at κ {kappa}");
        let hi = v.sub(&lo);
        worst_split = worst_split.max(rel(lo.l2_sq() + hi.l2_sq(), v.l2_sq()));
        let band = band_pass(&v, kappa, kappa + 1.5);
        check!(band_pass(&band, kappa, kappa + 1.5) == band, "band_pass not idempotent");
        check!(band.inner(&lo).abs() <= 1e-14 * v.l2_sq(), "band and low pass overlap");
    }
    check!(worst_split < 1e-12, "Plancherel partition off by {worst_split:e}");

    let mut worst_energy: f64 = 0.0;
    for seed in 0..20u64 {
        let u = common::random_solenoidal(g, 2000 + seed);
        let nl = nonlinear_term(&u).unwrap();
        worst_energy = worst_energy.max(nl.inner(&u).abs() / (u.l2_sq().sqrt() * u.h1_sq()));
    }
    check!(worst_energy < 1e-8, "advection energy leak {worst_energy:e}");

    let u = leray_project(&taylor_green_pair(g));
    let want = convolution_oracle(&u);
    let got = nonlinear_term(&u).unwrap();
    let conv = max_coeff_diff(&got, &want) / max_coeff(&want);
    check!(conv < 1e-10, "convolution oracle mismatch {conv:e}");

    within_budget("spectral suite", start, Duration::from_secs(60))?;
    Ok(format!(
        "split {worst_split:.1e}, energy leak {worst_energy:.1e}, convolution {conv:.1e}"
    ))
}

fn linear_exactness() -> Outcome {
    let g = grid(16, 2.0 * PI);
    let p = ModelParams {
        nu: 0.05,
        ell0: 1.0,
        theta: 1.0,
        alpha: 0.3,
        kappa: 2.5,
        delta: 0.0,
        dt: 0.05,
        t_end: 5.0,
        cfl_max: 0.5,
    };
    let zero = SpectralField::zeros(g);
    let mut worst: f64 = 0.0;
    // κ² = 6.25 separates |m|² ∈ {8, 9} from |m|² = 2
    let cases = [
        ([3, 0, 0], [0.0, 0.0, 1.0], false),
        ([0, 2, 2], [1.0, 0.0, 0.0], false),
        ([1, 1, 0], [1.0, -1.0, 0.0], true),
        ([1, 0, 1], [-1.0, 0.0, 1.0], true),
    ];
    for (m, pol, damped) in cases {
        let u0 = single_mode(g, m, pol);
        let mut sink = MemorySink::default();
        run(SimState::initial(u0), &zero, &p, RunControl::default(), &mut sink).unwrap();
        check!(sink.rows.len() == 101, "expected 100 steps, got {}", sink.rows.len() - 1);
        let k2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
        let want = p.nu * k2 + if damped { p.alpha } else { 0.0 };
        let k0 = sink.rows[0].kinetic;
        for r in &sink.rows[1..] {
            let measured = -(r.kinetic / k0).ln() / (2.0 * r.t);
            worst = worst.max(rel(measured, want));
        }
    }
    check!(worst < 1e-8, "decay rate error {worst:e}");

    let mut worst_beta: f64 = 0.0;
    for (nu, ell0, theta) in [(0.01, 1.0, 1.0), (1.0, 0.5, 2.0), (0.3, 2.0, 3.5), (2.0, 0.1, 1.0)] {
        let p = ModelParams::damped_default(nu, ell0, theta, 0.1, 1.0);
        worst_beta = worst_beta.max(rel(p.beta(), nu / (400.0 * theta * theta * ell0 * ell0)));
    }
    check!(worst_beta < 1e-14, "β arithmetic off by {worst_beta:e}");
    Ok(format!("rate error {worst:.1e}, β error {worst_beta:.1e}"))
}

fn energy_ledger() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::parse(
        r#"
mode = "damped-default"
seed = 5

[grid]
n = 32
box_len = 32.0

[model]
nu = 1.0
ell0 = 0.5
theta = 2.0
cfl_target = 0.25
t_end = 1.0

[force]
ell = 4.0
amplitude_scale = 0.01

[initial]
kind = "random"
energy_ratio = 25.0
"#,
    )
    .unwrap();
    let r = cfg.resolve().unwrap();
    let f = build_forcing(&r.force, r.grid).unwrap().field;
    let (u0, p0) = r.start(&cfg, &f).unwrap();
    let mut worst = Vec::new();
    for k in 0..2 {
        let mut p = p0;
        p.dt = p0.dt / f64::from(1 << k);
        p.t_end = 40.0 * p0.dt;
        let mut sink = MemorySink::default();
        run(SimState::initial(u0.clone()), &f, &p, RunControl::default(), &mut sink).unwrap();
        let cumulative = cumulative_energy_violation(&sink.rows);
        check!(cumulative <= 0.0, "cumulative energy inequality violated by {cumulative:e} at dt {}", p.dt);
        worst.push(sink.rows.iter().map(|r| r.relative_residual()).fold(0.0, f64::max));
    }
    check!(worst[0] <= 1e-7, "per-step residual {:e} at CFL 0.25", worst[0]);
    let order = (worst[0] / worst[1]).log2();
    check!(order >= 2.0, "residual order {order:.2} under dt halving");
    within_budget("ledger runs", start, Duration::from_secs(300))?;
    Ok(format!("residual {:.1e}, observed order {order:.2}", worst[0]))
}

fn support_violations(f: &SpectralField, lo: f64, hi: f64) -> usize {
    let g = *f.grid();
    let modes = Modes::new(&g);
    (0..g.len())
        .filter(|&idx| {
            let xi = modes.xi(idx);
            let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            f.coeff(idx).iter().any(|c| *c != ZERO) && (k < lo || k > hi)
        })
        .count()
}

fn force_construction() -> Outcome {
    let start = Instant::now();
    let g = grid(128, 256.0);
    let (theta, ell0, nu) = (1.0, 1.0, 1.0);
    let (lo, hi) = annulus(theta, ell0);
    let ells = [4.0, 8.0, 16.0, 32.0, 64.0];
    let (mut l2, mut linf) = (Vec::new(), Vec::new());
    let mut worst_gr: f64 = 0.0;
    for ell in ells {
        let profile = ProfileSpec {
            theta,
            ..ProfileSpec::default()
        };
        let spec = ForceSpec::damped_default(profile, ell0, ell, nu);
        let forcing = build_forcing(&spec, g).unwrap();
        let bad = support_violations(&forcing.field, lo, hi);
        check!(bad == 0, "{bad} modes outside the annulus at ℓ = {ell}");
        let n: &ForceNumbers = &forcing.numbers;
        l2.push(n.norms.l2);
        linf.push(n.norms.linf);
        worst_gr = worst_gr.max(rel(n.gr * n.c0 * n.gamma.powi(4), n.g0));
    }
    let s2 = fit::log_log_slope(&ells, &l2);
    let s_inf = fit::log_log_slope(&ells, &linf);
    check!((s2 - 1.5).abs() <= 0.15, "L² slope {s2:.3}");
    check!(s_inf.abs() <= 0.15, "L∞ slope {s_inf:.3}");
    check!(worst_gr < 1e-10, "Grashof identity off by {worst_gr:e}");
    within_budget("force construction", start, Duration::from_secs(60))?;
    Ok(format!("L² slope {s2:.3}, L∞ slope {s_inf:.3}, identity {worst_gr:.1e}"))
}

struct DeskRuns {
    _dir: tempfile::TempDir,
    damped: DiagnosticsReport,
    random: DiagnosticsReport,
    classical: DiagnosticsReport,
    elapsed: Duration,
}

fn desk_runs() -> &'static DeskRuns {
    static RUNS: OnceLock<DeskRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let dir = tempfile::tempdir().unwrap();
        let go = |name: &str| cmd_run(&preset(name).unwrap(), &dir.path().join(name)).unwrap().report;
        DeskRuns {
            damped: go("desk"),
            random: go("desk-random"),
            classical: go("desk-classical"),
            elapsed: start.elapsed(),
            _dir: dir,
        }
    })
}

fn decay_envelope() -> Outcome {
    let runs = desk_runs();
    let mut cs = Vec::new();
    for (label, r) in [("from rest", &runs.damped), ("random start", &runs.random)] {
        let v = r.verdict("decay_envelope").ok_or(format!("{label}: no envelope verdict"))?;
        check!(v.pass, "{label}: envelope c = {:e}", r.envelope_c);
        check!(r.envelope_c <= 10.0, "{label}: envelope c = {:e}", r.envelope_c);
        cs.push(r.envelope_c);
    }
    for name in ["growth_slope", "growth_pointwise"] {
        let v = runs.classical.verdict(name).ok_or(format!("α = 0: no {name} verdict"))?;
        check!(v.pass, "α = 0: {name} lhs {:e} rhs {:e}", v.lhs, v.rhs);
    }
    check!(runs.elapsed < Duration::from_secs(600), "desk runs took {:.1?}", runs.elapsed);
    Ok(format!("c = {:.3} (rest), {:.3} (random), α = 0 growth bound holds", cs[0], cs[1]))
}

struct SweepRun {
    dir: tempfile::TempDir,
    report: SweepReport,
    elapsed: Duration,
}

fn sweep_run() -> &'static SweepRun {
    static SWEEP: OnceLock<SweepRun> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let dir = tempfile::tempdir().unwrap();
        let workers = rayon::current_num_threads();
        let report = cmd_sweep(&preset("sweep").unwrap(), dir.path(), workers).unwrap();
        SweepRun {
            dir,
            report,
            elapsed: start.elapsed(),
        }
    })
}

const BOUNDS: [&str; 3] = ["eps_le_forcing_hm1", "eps_le_fu", "poincare_u_bound"];

fn dissipation_bounds() -> Outcome {
    let sweep = sweep_run();
    let mut reports = vec![("desk".to_string(), desk_runs().damped.clone())];
    for &ell in &sweep.report.analysis.ells {
        match cmd_report(&point_dir(sweep.dir.path(), ell)).map_err(|e| e.to_string())? {
            Summary::Run(r, _) => reports.push((format!("ℓ = {ell}"), *r)),
            Summary::Sweep(_) => return Err("nested sweep".into()),
        }
    }
    let mut tightest: f64 = 0.0;
    for (label, r) in &reports {
        for name in BOUNDS {
            let v = r.verdict(name).ok_or(format!("{label}: no {name} verdict"))?;
            check!(v.pass, "{label}: {name} lhs {:e} rhs {:e}", v.lhs, v.rhs);
            tightest = tightest.max(v.lhs / v.rhs);
        }
    }
    Ok(format!("{} runs, tightest lhs/rhs {tightest:.3}", reports.len()))
}

fn sweep_scaling() -> Outcome {
    let sweep = sweep_run();
    let r = &sweep.report;
    check!(r.failures.is_empty(), "failed points: {:?}", r.failures);
    let failed: Vec<_> = r.analysis.verdicts.iter().filter(|v| !v.pass).map(|v| v.name.clone()).collect();
    check!(failed.is_empty(), "failed verdicts: {failed:?}");
    check!(sweep.elapsed < Duration::from_secs(3600), "sweep took {:.1?}", sweep.elapsed);
    let a = &r.analysis;
    Ok(format!(
        "Gr span {:.0}, slopes Gr {:.2} U {:.2} ε {:.2}, ℓ₀/√Re shrinks {:.1}×",
        a.gr_span, a.gr_slope, a.u_slope, a.eps_slope, a.turbulent_taylor_shrink
    ))
}

fn constants_pipeline() -> Outcome {
    let a = a1(1.0, 1.0, 1.0);
    check!(a == 1.0 / 160_000.0, "a₁ = {a:e}");
    // a₂ = x⁻² with c₁x² + c₃√(c₀/G₀)x = 1
    let mut worst: f64 = 0.0;
    for (c0, c1, c3, g0) in [(1.0, 1.0, 1.0, 1.0), (0.3, 2.5, 0.7, 40.0), (1.2, 0.01, 3.0, 1e4)] {
        let x = 1.0 / a2(c0, c1, c3, g0).sqrt();
        worst = worst.max((c1 * x * x + c3 * f64::sqrt(c0 / g0) * x - 1.0).abs());
    }
    check!(worst < 1e-12, "a₂ root residual {worst:e}");

    let r = preset("desk").unwrap().resolve().unwrap();
    let n = build_forcing(&r.force, r.grid).unwrap().numbers;
    let theta = r.params.theta;
    let k = theoretical_constants(&n, theta, n.g0);
    check!(rel(k.a1, n.c0 / (160_000.0 * theta.powi(4) * n.g0)) < 1e-15, "a₁ on calibrated profile");
    check!(rel(k.b1, k.a1 / (400.0 * theta * theta)) < 1e-15, "b₁ on calibrated profile");
    check!(k.g0_condition == (4.0 * k.a2 * n.g0 / n.c0 <= 1.0), "Grashof condition flag");
    check!(k.compat == (n.c0 * (1.0 + n.c3.sqrt()).powi(2) / n.c1 < n.g0), "compatibility flag");
    Ok(format!(
        "a₁ = 1/160000 exact; calibrated profile: G₀ condition {}, compatibility {}",
        k.g0_condition, k.compat
    ))
}

fn reproducibility() -> Outcome {
    let start = Instant::now();
    let cfg = preset("smoke").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    cmd_run(&cfg, a.path()).map_err(|e| e.to_string())?;
    cmd_run(&cfg, b.path()).map_err(|e| e.to_string())?;
    let ma = RunManifest::read(a.path()).unwrap();
    check!(ma.files == RunManifest::read(b.path()).unwrap().files, "run twice: manifests differ");

    // restart from the first checkpoint in b
    let first = std::fs::read_dir(b.path().join(files::CHECKPOINTS))
        .unwrap()
        .map(|e| e.unwrap().path())
        .min()
        .ok_or("no checkpoints written")?;
    cmd_resume(&first, None).map_err(|e| e.to_string())?;
    check!(ma.files == RunManifest::read(b.path()).unwrap().files, "resume: output differs");

    let ledger = a.path().join(files::LEDGER);
    let mut bytes = std::fs::read(&ledger).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x01;
    std::fs::write(&ledger, bytes).unwrap();
    match cmd_verify(a.path()) {
        Err(e @ Error::DigestMismatch(_)) if e.to_string().contains(files::LEDGER) => {}
        other => return Err(format!("corruption not detected: {:?}", other.map(|_| ()))),
    }
    within_budget("reproducibility", start, Duration::from_secs(300))?;
    Ok(format!("{} files identical across runs and after restart", ma.files.len()))
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("spectral_correctness", spectral_correctness),
        ("linear_exactness", linear_exactness),
        ("energy_ledger", energy_ledger),
        ("force_construction", force_construction),
        ("decay_envelope", decay_envelope),
        ("dissipation_bounds", dissipation_bounds),
        ("sweep_scaling", sweep_scaling),
        ("constants_pipeline", constants_pipeline),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name:<22} {secs:>7.1}s  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name:<22} {secs:>7.1}s  {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
