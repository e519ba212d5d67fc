use serde::{Deserialize, Serialize};

use crate::forcing::ForceNumbers;

/// Constants of the dissipation-law proof.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalConstants {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    /// `4 a₂ G₀ / c₀ ≤ 1`
    pub g0_condition: bool,
    /// `c₀ (1 + √c₃)² / c₁ < G₀`
    pub compat: bool,
}

/// `a₁ = c₀/(400² θ⁴ G₀)`.
pub fn a1(c0: f64, theta: f64, g0: f64) -> f64 {
    c0 / (160_000.0 * theta.powi(4) * g0)
}

/// `a₂ = x⁻²` where `x = (-c₃√(c₀/G₀) + √(c₃² c₀/G₀ + 4c₁)) / (2c₁)` is the
/// positive root of `c₁x² + c₃√(c₀/G₀) x - 1 = 0`.
pub fn a2(c0: f64, c1: f64, c3: f64, g0: f64) -> f64 {
    let b = c3 * (c0 / g0).sqrt();
    let x = (-b + (b * b + 4.0 * c1).sqrt()) / (2.0 * c1);
    1.0 / (x * x)
}

pub fn theoretical_constants(numbers: &ForceNumbers, theta: f64, g0: f64) -> TheoreticalConstants {
    let (c0, c1, c3) = (numbers.c0, numbers.c1, numbers.c3);
    let a1 = a1(c0, theta, g0);
    let a2 = a2(c0, c1, c3, g0);
    TheoreticalConstants {
        a1,
        a2,
        b1: a1 / (20.0 * theta).powi(2),
        b2: a2,
        g0_condition: 4.0 * a2 * g0 / c0 <= 1.0,
        compat: c0 * (1.0 + c3.sqrt()).powi(2) / c1 < g0,
    }
}
