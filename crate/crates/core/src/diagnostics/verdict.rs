use serde::{Deserialize, Serialize};

/// Outcome of one checked inequality, stated as `lhs ≤ rhs` where `rhs`
/// already includes the tolerance factor `tol`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Verdict {
    /// `lhs ≤ tol * bound`.
    pub fn le(name: &str, lhs: f64, bound: f64, tol: f64) -> Self {
        let rhs = tol * bound;
        Verdict {
            name: name.to_string(),
            lhs,
            rhs,
            tol,
            pass: lhs <= rhs,
        }
    }

    /// `bound ≤ value`, recorded as `lhs = bound`, `rhs = value`.
    pub fn ge(name: &str, value: f64, bound: f64) -> Self {
        Verdict {
            name: name.to_string(),
            lhs: bound,
            rhs: value,
            tol: 1.0,
            pass: bound <= value,
        }
    }

    /// `|value - target| ≤ rel |target|`, recorded as `lhs = value`,
    /// `rhs = target`, `tol = rel`.
    pub fn within(name: &str, value: f64, target: f64, rel: f64) -> Self {
        Verdict {
            name: name.to_string(),
            lhs: value,
            rhs: target,
            tol: rel,
            pass: (value - target).abs() <= rel * target.abs(),
        }
    }

    /// `rhs / lhs` for passing checks, the remaining headroom factor.
    pub fn slack(&self) -> f64 {
        self.rhs / self.lhs
    }
}

pub fn all_pass(v: &[Verdict]) -> bool {
    v.iter().all(|x| x.pass)
}
