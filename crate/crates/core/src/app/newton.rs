use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 100;
pub const POLE_GAP: f64 = 1e-9;

/// One member of a polynomial family solved by warm-started Newton.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonEntry {
    pub n: usize,
    /// Exact coefficients of the cleared numerator, lowest power first.
    pub polynomial: Vec<String>,
    pub warm_start: f64,
    pub iterations: usize,
    pub root: f64,
    /// `|p(root)| / Σ |c_k root^k|`.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NewtonTrace {
    pub entries: Vec<NewtonEntry>,
}

impl NewtonTrace {
    pub fn roots(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.root).collect()
    }

    pub fn last_root(&self) -> Option<f64> {
        self.entries.last().map(|e| e.root)
    }
}

/// Horner evaluation of `p` and `p'`.
pub fn eval_with_derivative(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

pub fn relative_residual(c: &[f64], x: f64) -> f64 {
    let (p, _) = eval_with_derivative(c, x);
    let scale: f64 = c.iter().enumerate().map(|(k, a)| (a * x.powi(k as i32)).abs()).sum();
    if scale == 0.0 {
        p.abs()
    } else {
        p.abs() / scale
    }
}

/// Newton's method on a polynomial (coefficients lowest first) until the step is below
/// `NEWTON_TOL`; `n` labels the failure.
pub fn newton_root(c: &[f64], start: f64, n: usize) -> Result<(f64, usize)> {
    let mut x = start;
    for it in 1..=NEWTON_MAX_ITER {
        let (p, dp) = eval_with_derivative(c, x);
        if p == 0.0 {
            return Ok((x, it));
        }
        if dp == 0.0 || !dp.is_finite() {
            return Err(Error::NewtonDiverged(n));
        }
        let step = p / dp;
        x -= step;
        if !x.is_finite() {
            return Err(Error::NewtonDiverged(n));
        }
        if step.abs() < NEWTON_TOL {
            return Ok((x, it));
        }
    }
    Err(Error::NewtonDiverged(n))
}
