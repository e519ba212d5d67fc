mod common;

use std::f64::consts::PI;

use common::*;
use kolmodamp::spectral::*;
use proptest::prelude::*;

fn grid(n: usize, box_len: f64) -> GridSpec {
    GridSpec::new(n, box_len).unwrap()
}

#[test]
fn grid_wavenumbers_and_dealias() {
    let g = grid(16, 2.0 * PI);
    assert_eq!(g.mode(8), 8);
    assert_eq!(g.mode(9), -7);
    assert_eq!(g.wavenumber(3), 3.0);
    assert_eq!(g.m_max(), 5);
    // 48/3 = 16 sits exactly on the alias edge and is dropped
    assert_eq!(grid(48, 1.0).m_max(), 15);
    assert_eq!(grid(64, 1.0).m_max(), 21);
    assert!(GridSpec::new(15, 1.0).is_err());
}

#[test]
fn round_trip_transform() {
    let g = grid(16, 3.0);
    let u = random_field(g, 1);
    let [x, y, z] = u.to_physical();
    let back = SpectralField::from_physical(g, [&x, &y, &z]);
    assert!(max_coeff_diff(&u, &back) <= 1e-12 * max_coeff(&u));
    assert_eq!(back.hermitian_defect(), 0.0);
}

#[test]
fn leray_kills_gradients_and_keeps_solenoidal_modes() {
    let g = grid(16, 5.0);
    let grad = SpectralField::from_modes(g, |m, xi| {
        let s = C64::new(0.3 * m[0] as f64, -0.1 * (m[1] + m[2]) as f64);
        [s * xi[0], s * xi[1], s * xi[2]]
    });
    assert!(max_coeff(&leray_project(&grad)) <= 1e-14 * max_coeff(&grad));

    let v = single_mode(g, [1, 2, 0], [2.0, -1.0, 0.5]);
    assert_eq!(leray_project(&v), v);
}

#[test]
fn leray_matches_scalar_oracle() {
    let g = grid(16, 7.0);
    let v = random_field(g, 2);
    let p = leray_project(&v);
    assert!(p.max_divergence_ratio() < 1e-12);
    let modes = Modes::new(&g);
    let mut worst: f64 = 0.0;
    for idx in 0..g.len() {
        if !modes.retained(idx) {
            continue;
        }
        let o = leray_oracle(modes.xi(idx), v.coeff(idx));
        let got = p.coeff(idx);
        for a in 0..3 {
            worst = worst.max((o[a] - got[a]).norm());
        }
    }
    assert!(worst <= 1e-13 * max_coeff(&v), "worst {worst}");
}

#[test]
fn low_pass_and_band_pass_basics() {
    let g = grid(16, 2.0 * PI);
    let v = single_mode(g, [3, 0, 0], [0.0, 1.0, 0.0]);
    assert!(low_pass(&v, 3.0).is_zero());
    assert_eq!(low_pass(&v, 3.5), v);

    let w = random_field(g, 3);
    let lp = low_pass(&w, 2.7);
    assert_eq!(low_pass(&lp, 2.7), lp);
    assert_eq!(band_pass(&w, 1e-9, 1e9), w);

    let bp = band_pass(&w, 3.0, 4.5);
    let lp = low_pass(&w, 2.5);
    for c in 0..3 {
        for (x, y) in bp.component(c).iter().zip(lp.component(c)) {
            assert_eq!(*x * *y, ZERO);
        }
    }
    let bb = band_pass(&bp, 3.0, 4.5);
    assert_eq!(bb, bp);
}

#[test]
fn low_pass_commutes_with_leray() {
    let g = grid(12, 4.0);
    let v = random_field(g, 4);
    let a = leray_project(&low_pass(&v, 4.0));
    let b = low_pass(&leray_project(&v), 4.0);
    assert_eq!(a, b);
}

#[test]
fn plancherel_partition_over_random_fields() {
    let g = grid(8, 3.0);
    for seed in 0..100u64 {
        let v = random_field(g, 1000 + seed);
        let kappa = 1.0 + (seed as f64) * 0.07;
        let lo = low_pass(&v, kappa);
        let hi = v.sub(&lo);
        let total = v.l2_sq();
        let split = lo.l2_sq() + hi.l2_sq();
        assert!(rel(split, total) < 1e-12, "seed {seed}");
    }
}

#[test]
fn single_shell_norms() {
    let g = grid(16, 2.0 * PI);
    let v = single_mode(g, [0, 2, 1], [1.0, 0.0, 0.0]);
    let n = v.norms();
    let k = 5f64.sqrt();
    assert!(rel(n.h1, k * n.l2) < 1e-14);
    assert!(rel(n.hm1, n.l2 / k) < 1e-14);
    assert!(n.l2 * n.l2 <= n.hm1 * n.h1 * (1.0 + 1e-14));
    // |cos| integrates to half the box volume
    assert!(rel(n.l2 * n.l2, 0.5 * (2.0 * PI).powi(3)) < 1e-14);
    assert!(rel(n.linf, 1.0) < 1e-14);

    let z = SpectralField::zeros(g).norms();
    assert_eq!((z.l2, z.h1, z.hm1, z.linf), (0.0, 0.0, 0.0, 0.0));
}

/// Physical values by direct summation of the Fourier series.
fn direct_synthesis(v: &SpectralField) -> Vec<[f64; 3]> {
    let g = *v.grid();
    let modes = Modes::new(&g);
    let nz: Vec<usize> = (0..g.len())
        .filter(|&i| v.coeff(i).iter().any(|c| c.norm() > 0.0))
        .collect();
    let mut out = vec![[0.0; 3]; g.len()];
    for (p, o) in out.iter_mut().enumerate() {
        let (i, j, k) = g.split(p);
        let x = [i as f64 * g.dx(), j as f64 * g.dx(), k as f64 * g.dx()];
        for &idx in &nz {
            let xi = modes.xi(idx);
            let ph = xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
            let e = C64::new(ph.cos(), ph.sin());
            let c = v.coeff(idx);
            for a in 0..3 {
                o[a] += (c[a] * e).re;
            }
        }
    }
    out
}

#[test]
fn l2_matches_physical_riemann_sum() {
    let g = grid(8, 2.5);
    let v = random_field(g, 5);
    let vals = direct_synthesis(&v);
    let quad: f64 = vals.iter().map(|u| u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sum::<f64>()
        * g.dx().powi(3);
    assert!(rel(v.l2_sq(), quad) < 1e-10);
    let linf = vals
        .iter()
        .map(|u| (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt())
        .fold(0.0, f64::max);
    assert!(rel(v.linf(), linf) < 1e-10);
}

#[test]
fn advection_of_single_mode_vanishes() {
    let g = grid(16, 2.0 * PI);
    let v = single_mode(g, [1, 1, 0], [1.0, -1.0, 0.7]);
    let nl = nonlinear_term(&v).unwrap();
    assert!(max_coeff(&nl) < 1e-15);
}

#[test]
fn nonlinear_rejects_compressible_input() {
    let g = grid(8, 1.0);
    let v = random_field(g, 6);
    assert!(matches!(nonlinear_term(&v), Err(kolmodamp::Error::NotDivergenceFree { .. })));
}

#[test]
fn nonlinear_matches_convolution_oracle() {
    let g = grid(16, 2.0 * PI);
    let u = leray_project(&taylor_green_pair(g));
    assert!(u.max_divergence_ratio() < 1e-12);
    let got = nonlinear_term(&u).unwrap();
    let want = convolution_oracle(&u);
    let scale = max_coeff(&want);
    assert!(scale > 0.01, "{scale}");
    assert!(max_coeff_diff(&got, &want) <= 1e-10 * scale);
}

#[test]
fn advection_is_energy_neutral() {
    for (n, seed) in [(16usize, 7u64), (24, 8), (32, 9)] {
        let g = grid(n, 3.0 + n as f64 / 10.0);
        let u = random_solenoidal(g, seed);
        let nl = nonlinear_term(&u).unwrap();
        let scale = u.l2_sq().sqrt() * u.h1_sq();
        assert!(nl.inner(&u).abs() / scale < TOL_ENERGY);
        assert!(nl.max_divergence_ratio() < TOL_DIV);
        assert_eq!(nl.hermitian_defect(), 0.0);

        let nm = nonlinear_term_mollified(&u, 0.5).unwrap();
        assert!(nm.inner(&u).abs() / scale < TOL_ENERGY);
    }
}

#[test]
fn reductions_are_thread_count_independent() {
    let g = grid(32, 3.0);
    let u = random_field(g, 10);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = one.install(|| (u.l2_sq(), u.h1_sq(), u.linf(), u.inner(&u)));
    let b = three.install(|| (u.l2_sq(), u.h1_sq(), u.linf(), u.inner(&u)));
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leray_is_idempotent_self_adjoint_contractive(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let g = grid(8, 2.0);
        let v = random_field(g, s1);
        let w = random_field(g, s2);
        let pv = leray_project(&v);
        let ppv = leray_project(&pv);
        prop_assert!(max_coeff_diff(&pv, &ppv) <= 1e-14 * max_coeff(&v));
        let a = pv.inner(&w);
        let b = v.inner(&leray_project(&w));
        prop_assert!((a - b).abs() <= 1e-12 * (v.l2_sq() * w.l2_sq()).sqrt());
        prop_assert!(pv.l2_sq() <= v.l2_sq());
    }

    #[test]
    fn filters_are_orthogonal_projections(seed in 0u64..10_000, kappa in 0.5f64..12.0, width in 0.1f64..5.0) {
        let g = grid(8, 2.0);
        let v = random_field(g, seed);
        let w = random_field(g, seed + 1);
        for (pv, pw) in [
            (low_pass(&v, kappa), low_pass(&w, kappa)),
            (band_pass(&v, kappa, kappa + width), band_pass(&w, kappa, kappa + width)),
        ] {
            prop_assert!(pv.l2_sq() <= v.l2_sq());
            let a = pv.inner(&w);
            let b = v.inner(&pw);
            prop_assert!((a - b).abs() <= 1e-12 * (v.l2_sq() * w.l2_sq()).sqrt());
        }
        prop_assert_eq!(low_pass(&low_pass(&v, kappa), kappa), low_pass(&v, kappa));
    }

    #[test]
    fn advection_neutral_for_random_fields(seed in 0u64..10_000) {
        let g = grid(12, 2.5);
        let u = random_solenoidal(g, seed);
        let nl = nonlinear_term(&u).unwrap();
        let scale = u.l2_sq().sqrt() * u.h1_sq();
        prop_assert!(nl.inner(&u).abs() / scale < TOL_ENERGY);
    }
}
