use super::field::{NormSet, SpectralField, C64};

#[inline]
fn dot(xi: [f64; 3], c: [C64; 3]) -> C64 {
    c[0] * xi[0] + c[1] * xi[1] + c[2] * xi[2]
}

#[inline]
fn k2(xi: [f64; 3]) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

/// Per-mode Leray projection `c - xi (xi.c)/|xi|^2`.
#[inline]
pub fn leray_mode(xi: [f64; 3], c: [C64; 3]) -> [C64; 3] {
    let s = dot(xi, c) / k2(xi);
    [c[0] - s * xi[0], c[1] - s * xi[1], c[2] - s * xi[2]]
}

pub fn leray_project(v: &SpectralField) -> SpectralField {
    v.map_modes(leray_mode)
}

/// Keeps modes with `|xi| < kappa`.
pub fn low_pass(v: &SpectralField, kappa: f64) -> SpectralField {
    let k2c = kappa * kappa;
    v.map_modes(|xi, c| if k2(xi) < k2c { c } else { [C64::default(); 3] })
}

/// Keeps modes with `lo <= |xi| <= hi`.
pub fn band_pass(v: &SpectralField, lo: f64, hi: f64) -> SpectralField {
    v.map_modes(|xi, c| {
        let k = k2(xi).sqrt();
        if k >= lo && k <= hi {
            c
        } else {
            [C64::default(); 3]
        }
    })
}

pub fn norms(v: &SpectralField) -> NormSet {
    v.norms()
}
