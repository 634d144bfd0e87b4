//! Result emission: atomic file writes and the closure-curve CSV.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use super::newton::eval_with_derivative;
use crate::error::Result;
use crate::hnf::ClosurePolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// Writes `contents` to `dir/name` through a temporary file in the same directory.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// One sample of a closure curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub tau: f64,
    pub omega: f64,
    pub branch: usize,
}

/// Real roots of a polynomial (lowest power first) in `[-r, r]`, ascending.
///
/// Sign changes on a uniform grid are refined by bisection, so roots of even
/// multiplicity are not reported.
pub fn real_roots(c: &[f64], r: f64, grid: usize) -> Vec<f64> {
    let f = |x: f64| eval_with_derivative(c, x).0;
    let mut roots = Vec::new();
    let h = 2.0 * r / grid as f64;
    let mut a = -r;
    let mut fa = f(a);
    for k in 1..=grid {
        let b = -r + k as f64 * h;
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 || hi - lo < 1e-15 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Samples the real branches of `closure(w, tau) = 0` for `tau` in `[tau_min, tau_max]`.
///
/// Branches are numbered by the ascending order of the roots at each `tau`.
pub fn closure_curve(
    closure: &ClosurePolynomial,
    tau_min: f64,
    tau_max: f64,
    samples: usize,
    r: f64,
) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for k in 0..samples {
        let tau = if samples == 1 { tau_min } else { tau_min + (tau_max - tau_min) * k as f64 / (samples - 1) as f64 };
        for (branch, omega) in real_roots(&closure.at_tau(tau), r, 4000).into_iter().enumerate() {
            out.push(CurvePoint { tau, omega, branch });
        }
    }
    out
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from("tau,omega,branch\n");
    for p in points {
        s.push_str(&format!("{},{},{}\n", p.tau, p.omega, p.branch));
    }
    s
}
