use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::ExactScalar;

/// `Σ_{k<len} c_k x^k + O(x^len)` over the exact scalar field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<ExactScalar>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<ExactScalar>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn from_integers(c: &[i64]) -> Self {
        PowerSeries::new(c.iter().map(|&x| ExactScalar::from_integer(x)).collect())
    }

    pub fn zero(len: usize) -> Self {
        PowerSeries::new(vec![ExactScalar::zero(); len])
    }

    pub fn one(len: usize) -> Self {
        let mut s = PowerSeries::zero(len);
        if len > 0 {
            s.coeffs[0] = ExactScalar::one();
        }
        s
    }

    /// The variable `x` itself.
    pub fn var(len: usize) -> Self {
        let mut s = PowerSeries::zero(len);
        if len > 1 {
            s.coeffs[1] = ExactScalar::one();
        }
        s
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn truncate(&self, len: usize) -> Self {
        PowerSeries::new(self.coeffs.iter().take(len).cloned().collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        PowerSeries::new((0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        PowerSeries::new((0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        PowerSeries::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![ExactScalar::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PowerSeries::new(out)
    }

    /// `self(inner(x))`; `inner` must have no constant term.
    pub fn compose(&self, inner: &PowerSeries) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::Invalid("inner series has a constant term".into()));
        }
        let n = self.len().min(inner.len());
        let mut out = PowerSeries::zero(n);
        for c in self.coeffs.iter().take(n).rev() {
            out = out.mul(inner);
            out.coeffs[0] = &out.coeffs[0] + c;
        }
        Ok(out)
    }

    /// Compositional inverse, for a series `c1 x + O(x^2)` with `c1 ≠ 0`.
    pub fn reverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::Invalid("series to revert has a constant term".into()));
        }
        let c1 = self.coeff(1);
        let inv = c1.inv().map_err(|_| Error::JacobianSingular)?;
        let n = self.len();
        let x = PowerSeries::var(n);
        let mut g = x.scale(&inv);
        // each pass fixes one more coefficient of g
        for _ in 2..n {
            let err = self.compose(&g)?.sub(&x);
            g = g.sub(&err.scale(&inv));
        }
        Ok(g)
    }

    pub fn derivative(&self) -> Self {
        PowerSeries::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &ExactScalar::from_integer(k as i64)).collect(),
        )
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) if !c.is_compound() => (true, b.to_string()),
                _ => (false, if c.is_compound() { format!("({s})") } else { s }),
            };
            if first {
                write!(f, "{}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, body.as_str()) {
                (0, b) => write!(f, "{b}")?,
                (1, "1") => write!(f, "x")?,
                (1, b) => write!(f, "{b}x")?,
                (_, "1") => write!(f, "x^{k}")?,
                (_, b) => write!(f, "{b}x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversion_of_geometric() {
        // x/(1+x) reverts to x/(1-x)
        let f = PowerSeries::from_integers(&[0, 1, -1, 1, -1, 1, -1]);
        let g = f.reverse().unwrap();
        assert_eq!(g, PowerSeries::from_integers(&[0, 1, 1, 1, 1, 1, 1]));
        assert_eq!(f.compose(&g).unwrap(), PowerSeries::var(7));
    }

    #[test]
    fn display_and_eval() {
        let f = PowerSeries::from_integers(&[0, 1, 0, 0, 1, -2]);
        assert_eq!(f.to_string(), "x + x^4 - 2x^5 + O(x^6)");
        assert_eq!(f.eval_f64(0.5), 0.5 + 0.0625 - 0.0625);
    }
}
