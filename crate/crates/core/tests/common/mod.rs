#![allow(dead_code)]

use kolmodamp::spectral::{leray_project, GridSpec, Modes, SpectralField, C64, ZERO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_field(grid: GridSpec, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = grid.len();
    let comps: [Vec<C64>; 3] = std::array::from_fn(|_| {
        (0..len)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    });
    let mut f = SpectralField::from_components(grid, comps).unwrap();
    f.mask();
    f.symmetrize();
    f
}

pub fn random_solenoidal(grid: GridSpec, seed: u64) -> SpectralField {
    leray_project(&random_field(grid, seed))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn max_coeff_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    let mut m: f64 = 0.0;
    for c in 0..3 {
        for (x, y) in a.component(c).iter().zip(b.component(c)) {
            m = m.max((x - y).norm());
        }
    }
    m
}

pub fn max_coeff(a: &SpectralField) -> f64 {
    let mut m: f64 = 0.0;
    for c in 0..3 {
        for x in a.component(c) {
            m = m.max(x.norm());
        }
    }
    m
}

/// `a cos(k.x)` for the integer mode `m`.
pub fn single_mode(g: GridSpec, m: [i64; 3], a: [f64; 3]) -> SpectralField {
    SpectralField::from_modes(g, move |mm, _| {
        if mm == m || mm == [-m[0], -m[1], -m[2]] {
            [C64::new(a[0] / 2.0, 0.0), C64::new(a[1] / 2.0, 0.0), C64::new(a[2] / 2.0, 0.0)]
        } else {
            [ZERO; 3]
        }
    })
}

pub fn leray_oracle(xi: [f64; 3], c: [C64; 3]) -> [C64; 3] {
    let k2: f64 = xi.iter().map(|x| x * x).sum();
    let mut out = [ZERO; 3];
    for a in 0..3 {
        let mut re = c[a].re;
        let mut im = c[a].im;
        for b in 0..3 {
            let p = xi[a] * xi[b] / k2;
            re -= p * c[b].re;
            im -= p * c[b].im;
        }
        out[a] = C64::new(re, im);
    }
    out
}

pub fn taylor_green_pair(g: GridSpec) -> SpectralField {
    let k = g.k0();
    let mut x = vec![0.0; g.len()];
    let mut y = vec![0.0; g.len()];
    let mut z = vec![0.0; g.len()];
    for p in 0..g.len() {
        let (i, j, l) = g.split(p);
        let (a, b, c) = (i as f64 * g.dx(), j as f64 * g.dx(), l as f64 * g.dx());
        x[p] = (k * a).sin() * (k * b).cos() * (k * c).cos();
        y[p] = -(k * a).cos() * (k * b).sin() * (k * c).cos();
        z[p] = 0.4 * (2.0 * k * a + k * b).sin();
    }
    SpectralField::from_physical(g, [&x, &y, &z])
}

/// `P((u.grad)u)` by summing over all pairs of nonzero modes.
pub fn convolution_oracle(u: &SpectralField) -> SpectralField {
    let g = *u.grid();
    let modes = Modes::new(&g);
    let nz: Vec<([i64; 3], [f64; 3], [C64; 3])> = (0..g.len())
        .filter(|&i| u.coeff(i).iter().any(|c| c.norm() > 1e-14))
        .map(|i| {
            let (a, b, c) = g.split(i);
            ([g.mode(a), g.mode(b), g.mode(c)], modes.xi(i), u.coeff(i))
        })
        .collect();
    let mut acc = std::collections::HashMap::<[i64; 3], [C64; 3]>::new();
    for (mp, _, cp) in &nz {
        for (mq, xq, cq) in &nz {
            let m = [mp[0] + mq[0], mp[1] + mq[1], mp[2] + mq[2]];
            // (u(p) . i q) u(q)
            let s = (cp[0] * xq[0] + cp[1] * xq[1] + cp[2] * xq[2]) * C64::new(0.0, 1.0);
            let e = acc.entry(m).or_insert([ZERO; 3]);
            for a in 0..3 {
                e[a] += s * cq[a];
            }
        }
    }
    SpectralField::from_modes(g, |m, xi| match acc.get(&m) {
        Some(c) => leray_oracle(xi, *c),
        None => [ZERO; 3],
    })
}
