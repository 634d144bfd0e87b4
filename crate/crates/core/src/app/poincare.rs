//! The rational truncations `f_n(x, y) = −y + Σ_{k≤n} x^k / (1 + k y)`, their
//! series solution `y = b(x)`, and Newton continuation along `n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::newton::{newton_root, relative_residual, NewtonEntry, NewtonTrace, POLE_GAP};
use crate::error::{Error, Result};
use crate::hnf::solve_fixed_point;
use crate::scalars::{ExactScalar, FrequencyVector};
use crate::series::{Monomial, PowerSeries, RingContext, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoincareTruncation {
    n: usize,
}

fn poly_mul(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn poly_add(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(ExactScalar::zero);
            let y = b.get(k).cloned().unwrap_or_else(ExactScalar::zero);
            &x + &y
        })
        .collect()
}

/// Scales a rational polynomial to primitive integer form with a positive constant term.
pub fn primitive_integer(c: &[ExactScalar]) -> Result<Vec<BigInt>> {
    let rats: Vec<&BigRational> = c
        .iter()
        .map(|x| x.as_rational().ok_or(Error::Invalid("polynomial is not rational".into())))
        .collect::<Result<_>>()?;
    let lcm = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (*r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Ok(ints);
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    Ok(ints.into_iter().map(|x| x / &g * &sign).collect())
}

impl PoincareTruncation {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("truncation order must be at least 1".into()));
        }
        Ok(PoincareTruncation { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        -y + (1..=self.n).map(|k| x.powi(k as i32) / (1.0 + k as f64 * y)).sum::<f64>()
    }

    /// Poles in `y`: `−1/k` for `k = 1..n`.
    pub fn poles(&self) -> Vec<f64> {
        (1..=self.n).map(|k| -1.0 / k as f64).collect()
    }

    /// `f_n(x0, y) · Π (1 + k y)` as a polynomial in `y`, lowest power first.
    pub fn numerator_at(&self, x0: &ExactScalar) -> Vec<ExactScalar> {
        let factor = |k: usize| vec![ExactScalar::one(), ExactScalar::from_integer(k as i64)];
        let mut all = vec![ExactScalar::one()];
        for k in 1..=self.n {
            all = poly_mul(&all, &factor(k));
        }
        let mut out = poly_mul(&all, &[ExactScalar::zero(), ExactScalar::from_integer(-1)]);
        for k in 1..=self.n {
            let mut others = vec![x0.pow(k as u32)];
            for j in (1..=self.n).filter(|&j| j != k) {
                others = poly_mul(&others, &factor(j));
            }
            out = poly_add(&out, &others);
        }
        out
    }

    /// The numerator at `x0` in primitive integer form.
    pub fn cleared_at(&self, x0: &ExactScalar) -> Result<Vec<BigInt>> {
        primitive_integer(&self.numerator_at(x0))
    }
}

impl fmt::Display for PoincareTruncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-y")?;
        for k in 1..=self.n {
            let num = if k == 1 { "x".to_string() } else { format!("x^{k}") };
            let den = if k == 1 { "1 + y".to_string() } else { format!("1 + {k}y") };
            write!(f, " + {num}/({den})")?;
        }
        Ok(())
    }
}

/// Renders an integer polynomial in `y`, highest power first.
pub fn format_poly(c: &[BigInt], var: &str) -> String {
    let mut s = String::new();
    for (k, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let neg = a.is_negative();
        let mag = a.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coef = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
        match k {
            0 => s.push_str(&coef),
            1 => s.push_str(&format!("{coef}{var}")),
            _ => s.push_str(&format!("{coef}{var}^{k}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// `y = b(x)` solving `f(x, y) = 0`, through `x^order`.
///
/// `x` plays the role of a weight-2 variable in the implicit solver, so
/// the working ring is truncated at `2 order + 2`.
pub fn poincare_birkhoff_series(order: u32) -> Result<PowerSeries> {
    let ctx = RingContext::new(FrequencyVector::from_integers(&[1])?, 2 * order + 2)?;
    let x = Series::tau(&ctx, 0);
    let powers: Vec<Series> = (0..=order).map(|k| x.pow(k)).collect();
    let jac = vec![vec![ExactScalar::from_integer(-1)]];
    let y = solve_fixed_point(&ctx, &jac, 2 * order + 2, |y| {
        let mut r = y[0].neg();
        for k in 1..=order {
            let den = Series::one(&ctx).add(&y[0].scale_scalar(&ExactScalar::from_integer(i64::from(k))));
            r = r.add(&powers[k as usize].mul(&den.reciprocal()?));
        }
        Ok(vec![r])
    })?;
    let coeffs = (0..=order)
        .map(|k| {
            y[0].coeff(&Monomial::tau_power(vec![k]))
                .map(|c| c.as_scalar().expect("constant coefficient"))
                .unwrap_or_else(ExactScalar::zero)
        })
        .collect();
    Ok(PowerSeries::new(coeffs))
}

/// `b_n(x0)` for `n = 1..n_max`, where `b_n` keeps the terms through `x^n`.
pub fn birkhoff_truncation_table(x0: f64, n_max: u32) -> Result<Vec<f64>> {
    let b = poincare_birkhoff_series(n_max)?;
    Ok((1..=n_max as usize).map(|n| b.truncate(n + 1).eval_f64(x0)).collect())
}

/// Tracks a root of the cleared `f_n(x0, ·)` for `n = 1..n_max`, each Newton run
/// starting from the previous root.
pub fn newton_continuation(x0: f64, n_max: usize, y0: f64) -> Result<NewtonTrace> {
    let x = ExactScalar::from_f64(x0)?;
    let mut trace = NewtonTrace::default();
    let mut start = y0;
    for n in 1..=n_max {
        let f = PoincareTruncation::new(n)?;
        let exact = f.numerator_at(&x);
        let c: Vec<f64> = exact.iter().map(ExactScalar::to_f64).collect();
        let (root, iterations) = newton_root(&c, start, n)?;
        if f.poles().iter().any(|p| (root - p).abs() < POLE_GAP) {
            return Err(Error::PoleCollision { n, tol: POLE_GAP });
        }
        let polynomial = match f.cleared_at(&x) {
            Ok(ints) => ints.iter().map(BigInt::to_string).collect(),
            Err(_) => exact.iter().map(ExactScalar::to_string).collect(),
        };
        trace.entries.push(NewtonEntry {
            n,
            polynomial,
            warm_start: start,
            iterations,
            root,
            residual: relative_residual(&c, root),
        });
        start = root;
    }
    Ok(trace)
}
