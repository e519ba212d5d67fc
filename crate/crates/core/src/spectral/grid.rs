use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic cube with `n` points per axis.
///
/// Mode index `i` along an axis carries the integer wavenumber `m = i` for
/// `i <= n/2` and `m = i - n` otherwise, so `m` ranges over `-n/2+1..=n/2`,
/// and the physical wavenumber is `2*pi*m/box_len`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub box_len: f64,
    #[serde(default = "default_dealias")]
    pub dealias_fraction: f64,
}

fn default_dealias() -> f64 {
    2.0 / 3.0
}

impl GridSpec {
    pub fn new(n: usize, box_len: f64) -> Result<Self> {
        let g = GridSpec {
            n,
            box_len,
            dealias_fraction: default_dealias(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || self.n % 2 != 0 {
            return Err(Error::Grid(format!("n = {} must be even and >= 4", self.n)));
        }
        if !(self.box_len.is_finite() && self.box_len > 0.0) {
            return Err(Error::Grid(format!("box_len = {} must be positive", self.box_len)));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::Grid(format!(
                "dealias_fraction = {} must lie in (0, 1]",
                self.dealias_fraction
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.box_len / self.n as f64
    }

    /// Smallest nonzero wavenumber, 2*pi/box_len.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.box_len
    }

    pub fn volume(&self) -> f64 {
        self.box_len.powi(3)
    }

    pub fn mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.k0() * self.mode(i) as f64
    }

    /// Largest retained |m|. Modes with `|m| <= dealias_fraction*n/2` are kept,
    /// except that with the 2/3 rule an edge mode at exactly `n/3` is dropped:
    /// quadratic products from it alias back onto `-n/3`.
    pub fn m_max(&self) -> i64 {
        let raw = (self.dealias_fraction * self.n as f64 / 2.0 + 1e-9).floor() as i64;
        if self.dealias_fraction <= 2.0 / 3.0 + 1e-12 && 3 * raw >= self.n as i64 {
            raw - 1
        } else {
            raw
        }
    }

    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    pub fn axis_retained(&self) -> Vec<bool> {
        let mm = self.m_max();
        (0..self.n).map(|i| self.mode(i).abs() <= mm).collect()
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Flat index of the mode -xi.
    #[inline]
    pub fn conj_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j, k) = self.split(idx);
        self.index((n - i) % n, (n - j) % n, (n - k) % n)
    }

    /// Sorted distinct values of |xi| among retained modes inside `[lo, hi]`.
    pub fn shells_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mm = self.m_max();
        let mut sq = Vec::new();
        for a in 0..=mm {
            for b in 0..=a {
                for c in 0..=b {
                    let m2 = a * a + b * b + c * c;
                    if m2 > 0 {
                        sq.push(m2);
                    }
                }
            }
        }
        sq.sort_unstable();
        sq.dedup();
        sq.into_iter()
            .map(|m2| self.k0() * (m2 as f64).sqrt())
            .filter(|&k| k >= lo && k <= hi)
            .collect()
    }
}
