use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fft::Fft3;
use super::grid::GridSpec;
use super::reduce::{det_max, det_sum};
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Relative divergence tolerance for fields treated as solenoidal.
pub const TOL_DIV: f64 = 1e-10;
/// Relative tolerance for energy neutrality of the advection term.
pub const TOL_ENERGY: f64 = 1e-8;

/// Per-grid lookup tables: axis wavenumbers, split indices, retention mask,
/// |ξ|² and the index of -ξ for every flat mode index.
#[derive(Debug)]
pub struct Modes {
    pub k: Vec<f64>,
    ijk: Vec<[u16; 3]>,
    keep: Vec<bool>,
    k2: Vec<f64>,
    conj: Vec<u32>,
}

type ModesKey = (usize, u64, u64);
static MODES: OnceLock<Mutex<HashMap<ModesKey, Arc<Modes>>>> = OnceLock::new();

impl Modes {
    pub fn new(grid: &GridSpec) -> Arc<Self> {
        let key = (grid.n, grid.box_len.to_bits(), grid.dealias_fraction.to_bits());
        let cache = MODES.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("mode table cache poisoned");
        if map.len() > 8 {
            map.clear();
        }
        map.entry(key).or_insert_with(|| Arc::new(Modes::build(grid))).clone()
    }

    fn build(grid: &GridSpec) -> Self {
        let n = grid.n;
        let k = grid.axis_wavenumbers();
        let keep_axis = grid.axis_retained();
        let len = grid.len();
        let mut ijk = Vec::with_capacity(len);
        let mut keep = Vec::with_capacity(len);
        let mut k2 = Vec::with_capacity(len);
        let mut conj = Vec::with_capacity(len);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    ijk.push([i as u16, j as u16, l as u16]);
                    keep.push(keep_axis[i] && keep_axis[j] && keep_axis[l]);
                    k2.push(k[i] * k[i] + k[j] * k[j] + k[l] * k[l]);
                    conj.push((((n - i) % n * n + (n - j) % n) * n + (n - l) % n) as u32);
                }
            }
        }
        keep[0] = false;
        Modes {
            k,
            ijk,
            keep,
            k2,
            conj,
        }
    }

    #[inline]
    pub fn xi(&self, idx: usize) -> [f64; 3] {
        let [i, j, l] = self.ijk[idx];
        [self.k[i as usize], self.k[j as usize], self.k[l as usize]]
    }

    /// `|ξ|²`, summed as `ξ_x² + ξ_y² + ξ_z²`.
    #[inline]
    pub fn k2(&self, idx: usize) -> f64 {
        self.k2[idx]
    }

    #[inline]
    pub fn retained(&self, idx: usize) -> bool {
        self.keep[idx]
    }

    #[inline]
    pub fn conj(&self, idx: usize) -> usize {
        self.conj[idx] as usize
    }
}

/// Three-component real vector field stored as normalized Fourier
/// coefficients `c(xi) = (1/n^3) sum_x u(x) e^{-i xi.x}` on every grid mode.
/// Modes outside the dealiased cube and the mean are kept at exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    c: [Vec<C64>; 3],
}

/// L², Ḣ¹, Ḣ⁻¹ and L^∞ norms. The quadratic norms carry the box volume, so
/// `l2^2 = box_len^3 * sum |c|^2` approximates the whole-space integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSet {
    pub l2: f64,
    pub h1: f64,
    pub hm1: f64,
    pub linf: f64,
}

#[inline]
fn norm_sq3(v: &[C64; 3]) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        let len = grid.len();
        SpectralField {
            grid,
            c: [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]],
        }
    }

    /// Builds a field from a per-mode rule `(m, xi) -> coefficient`. The
    /// result is masked to retained modes, made mean-free and symmetrized so
    /// that it is Hermitian.
    pub fn from_modes<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn([i64; 3], [f64; 3]) -> [C64; 3] + Sync,
    {
        let modes = Modes::new(&grid);
        let mut out = SpectralField::zeros(grid);
        out.fill(&modes, |idx, xi| {
            let (i, j, k) = grid.split(idx);
            f([grid.mode(i), grid.mode(j), grid.mode(k)], xi)
        });
        out.symmetrize();
        out
    }

    /// Like [`from_modes`](Self::from_modes) but without symmetrization;
    /// the caller guarantees `f(-xi) = conj f(xi)` bit for bit.
    pub fn from_hermitian_rule<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(usize, [f64; 3]) -> [C64; 3] + Sync,
    {
        let modes = Modes::new(&grid);
        let mut out = SpectralField::zeros(grid);
        out.fill(&modes, f);
        out
    }

    fn fill<F>(&mut self, modes: &Modes, f: F)
    where
        F: Fn(usize, [f64; 3]) -> [C64; 3] + Sync,
    {
        let [a, b, c] = &mut self.c;
        a.par_iter_mut()
            .zip(b.par_iter_mut())
            .zip(c.par_iter_mut())
            .enumerate()
            .for_each(|(idx, ((x, y), z))| {
                if modes.retained(idx) {
                    let v = f(idx, modes.xi(idx));
                    *x = v[0];
                    *y = v[1];
                    *z = v[2];
                } else {
                    *x = ZERO;
                    *y = ZERO;
                    *z = ZERO;
                }
            });
    }

    /// Applies a per-mode map to the retained modes; other modes stay zero.
    pub fn map_modes<F>(&self, f: F) -> Self
    where
        F: Fn([f64; 3], [C64; 3]) -> [C64; 3] + Sync,
    {
        let modes = Modes::new(&self.grid);
        let mut out = SpectralField::zeros(self.grid);
        out.fill(&modes, |idx, xi| f(xi, self.coeff(idx)));
        out
    }

    /// Forward transform of a real physical field, truncated to retained modes.
    pub fn from_physical(grid: GridSpec, u: [&[f64]; 3]) -> Self {
        let (a, b) = forward_pair(&grid, u[0], Some(u[1]));
        let (c, _) = forward_pair(&grid, u[2], None);
        let mut out = SpectralField { grid, c: [a, b, c] };
        out.mask();
        out
    }

    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        let (x, y) = inverse_pair(&self.grid, &self.c[0], Some(&self.c[1]));
        let (z, _) = inverse_pair(&self.grid, &self.c[2], None);
        [x, y, z]
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, a: usize) -> &[C64] {
        &self.c[a]
    }

    pub fn components_mut(&mut self) -> &mut [Vec<C64>; 3] {
        &mut self.c
    }

    #[inline]
    pub fn coeff(&self, idx: usize) -> [C64; 3] {
        [self.c[0][idx], self.c[1][idx], self.c[2][idx]]
    }

    pub fn set_coeff(&mut self, idx: usize, v: [C64; 3]) {
        for a in 0..3 {
            self.c[a][idx] = v[a];
        }
    }

    pub fn from_components(grid: GridSpec, c: [Vec<C64>; 3]) -> Result<Self> {
        if c.iter().any(|v| v.len() != grid.len()) {
            return Err(Error::GridMismatch);
        }
        Ok(SpectralField { grid, c })
    }

    pub fn into_components(self) -> [Vec<C64>; 3] {
        self.c
    }

    /// Zeroes the mean and every mode outside the dealiased cube.
    pub fn mask(&mut self) {
        let modes = Modes::new(&self.grid);
        for comp in self.c.iter_mut() {
            comp.par_iter_mut().enumerate().for_each(|(idx, v)| {
                if !modes.retained(idx) {
                    *v = ZERO;
                }
            });
        }
    }

    /// Replaces `c(xi)` by `(c(xi) + conj c(-xi)) / 2`.
    pub fn symmetrize(&mut self) {
        let modes = Modes::new(&self.grid);
        for comp in self.c.iter_mut() {
            let src = comp.clone();
            comp.par_iter_mut().enumerate().for_each(|(idx, v)| {
                let p = modes.conj(idx);
                *v = (src[idx] + src[p].conj()) * 0.5;
            });
        }
    }

    /// Largest `|c(-xi) - conj c(xi)|` over all modes.
    pub fn hermitian_defect(&self) -> f64 {
        let modes = Modes::new(&self.grid);
        det_max(self.grid.len(), |idx| {
            let p = modes.conj(idx);
            (0..3)
                .map(|a| (self.c[a][p] - self.c[a][idx].conj()).norm())
                .fold(0.0, f64::max)
        })
    }

    pub fn check_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.zip_with(self, |a, _| a * s)
    }

    pub fn add(&self, other: &SpectralField) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with<F>(&self, other: &SpectralField, f: F) -> Self
    where
        F: Fn(C64, C64) -> C64 + Sync,
    {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let c = std::array::from_fn(|a| {
            self.c[a]
                .par_iter()
                .zip(other.c[a].par_iter())
                .map(|(x, y)| f(*x, *y))
                .collect()
        });
        SpectralField { grid: self.grid, c }
    }

    /// `sum over modes of w(xi) * |c(xi)|^2`, times the box volume.
    pub fn weighted_energy<W>(&self, w: W) -> f64
    where
        W: Fn([f64; 3]) -> f64 + Sync,
    {
        let modes = Modes::new(&self.grid);
        let s = det_sum(self.grid.len(), |idx| {
            if !modes.retained(idx) {
                return 0.0;
            }
            let v = self.coeff(idx);
            let n2 = norm_sq3(&v);
            if n2 == 0.0 {
                0.0
            } else {
                w(modes.xi(idx)) * n2
            }
        });
        s * self.grid.volume()
    }

    /// Real L² inner product `box^3 * sum Re(conj(a) . b)`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let s = det_sum(self.grid.len(), |idx| {
            let a = self.coeff(idx);
            let b = other.coeff(idx);
            (0..3).map(|q| (a[q].conj() * b[q]).re).sum::<f64>()
        });
        s * self.grid.volume()
    }

    pub fn l2_sq(&self) -> f64 {
        self.weighted_energy(|_| 1.0)
    }

    pub fn h1_sq(&self) -> f64 {
        self.weighted_energy(|xi| xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])
    }

    pub fn hm1_sq(&self) -> f64 {
        self.weighted_energy(|xi| 1.0 / (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]))
    }

    pub fn linf(&self) -> f64 {
        let [x, y, z] = self.to_physical();
        det_max(x.len(), |i| (x[i] * x[i] + y[i] * y[i] + z[i] * z[i]).sqrt())
    }

    pub fn norms(&self) -> NormSet {
        NormSet {
            l2: self.l2_sq().sqrt(),
            h1: self.h1_sq().sqrt(),
            hm1: self.hm1_sq().sqrt(),
            linf: self.linf(),
        }
    }

    /// `max |xi_hat . c(xi)| / max |c|`: the longitudinal part of every mode
    /// against the largest coefficient. Per-mode ratios would flag round-off
    /// in modes many decades below the field.
    pub fn max_divergence_ratio(&self) -> f64 {
        let modes = Modes::new(&self.grid);
        let len = self.grid.len();
        let big = det_max(len, |idx| norm_sq3(&self.coeff(idx)).sqrt());
        if big == 0.0 {
            return 0.0;
        }
        det_max(len, |idx| {
            let v = self.coeff(idx);
            let xi = modes.xi(idx);
            let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            if k == 0.0 {
                return 0.0;
            }
            (v[0] * xi[0] + v[1] * xi[1] + v[2] * xi[2]).norm() / (k * big)
        })
    }

    pub fn is_finite(&self) -> bool {
        self.c
            .iter()
            .all(|comp| comp.par_iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|comp| comp.iter().all(|v| *v == ZERO))
    }
}

/// Inverse transform of one or two Hermitian coefficient arrays packed into
/// one complex transform.
pub(crate) fn inverse_pair(
    grid: &GridSpec,
    a: &[C64],
    b: Option<&[C64]>,
) -> (Vec<f64>, Vec<f64>) {
    let mut z: Vec<C64> = match b {
        Some(b) => a
            .par_iter()
            .zip(b.par_iter())
            .map(|(x, y)| x + C64::new(-y.im, y.re))
            .collect(),
        None => a.to_vec(),
    };
    Fft3::shared(grid.n).inverse(&mut z);
    let re = z.par_iter().map(|v| v.re).collect();
    let im = if b.is_some() {
        z.par_iter().map(|v| v.im).collect()
    } else {
        Vec::new()
    };
    (re, im)
}

/// Normalized forward transform of one or two real arrays. Splitting the
/// packed spectrum with `(Z(xi) ± conj Z(-xi))/2` makes both outputs exactly
/// Hermitian.
pub(crate) fn forward_pair(
    grid: &GridSpec,
    x: &[f64],
    y: Option<&[f64]>,
) -> (Vec<C64>, Vec<C64>) {
    let mut z: Vec<C64> = match y {
        Some(y) => x
            .par_iter()
            .zip(y.par_iter())
            .map(|(a, b)| C64::new(*a, *b))
            .collect(),
        None => x.par_iter().map(|a| C64::new(*a, 0.0)).collect(),
    };
    Fft3::shared(grid.n).forward(&mut z);
    let norm = 1.0 / grid.len() as f64;
    let modes = Modes::new(grid);
    let a: Vec<C64> = (0..z.len())
        .into_par_iter()
        .with_min_len(4096)
        .map(|idx| {
            let p = modes.conj(idx);
            (z[idx] + z[p].conj()) * (0.5 * norm)
        })
        .collect();
    let b: Vec<C64> = if y.is_some() {
        (0..z.len())
            .into_par_iter()
            .with_min_len(4096)
            .map(|idx| {
                let p = modes.conj(idx);
                let d = (z[idx] - z[p].conj()) * (0.5 * norm);
                // divide by i
                C64::new(d.im, -d.re)
            })
            .collect()
    } else {
        Vec::new()
    };
    (a, b)
}
