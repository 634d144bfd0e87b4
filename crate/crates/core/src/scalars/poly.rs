//! Sparse multivariate polynomials in the detuning variables `w_1..w_d`.

use std::collections::BTreeMap;

use super::field::ExactScalar;
use super::frequency::LinearForm;
use crate::error::{Error, Result};

/// Polynomial over [`ExactScalar`] stored as an exponent map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl OmegaPoly {
    pub fn zero(nvars: usize) -> Self {
        OmegaPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ExactScalar) -> Self {
        let mut p = OmegaPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        OmegaPoly::constant(nvars, ExactScalar::one())
    }

    /// The variable `w_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = OmegaPoly::zero(nvars);
        p.terms.insert(e, ExactScalar::one());
        p
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Vec<u32>, ExactScalar)>) -> Self {
        let mut p = OmegaPoly::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    /// `c + Σ J_i w_i`.
    pub fn from_form(form: &LinearForm) -> Self {
        let d = form.dim();
        let mut p = OmegaPoly::constant(d, form.constant().clone());
        for (i, &j) in form.j().iter().enumerate() {
            if j != 0 {
                let mut e = vec![0; d];
                e[i] = 1;
                p.add_term(e, ExactScalar::from_integer(j));
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(ExactScalar::zero))
    }

    /// Value at `w = 0`.
    pub fn constant_term(&self) -> ExactScalar {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        OmegaPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return OmegaPoly::zero(self.nvars);
        }
        OmegaPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = OmegaPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = OmegaPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn mul_form(&self, form: &LinearForm) -> Self {
        self.mul(&OmegaPoly::from_form(form))
    }

    /// `∂/∂w_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = OmegaPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * &ExactScalar::from_integer(i64::from(e[i])));
            }
        }
        out
    }

    /// Exact quotient by a linear form, or `None` when it does not divide.
    pub fn div_form(&self, form: &LinearForm) -> Option<Self> {
        let k = form.j().iter().position(|&x| x != 0)?;
        let lead = ExactScalar::from_integer(form.j()[k]);
        let divisor = OmegaPoly::from_form(form);
        let mut rem = self.clone();
        let mut quot = OmegaPoly::zero(self.nvars);
        loop {
            let top = rem.degree_in(k);
            if top == 0 {
                break;
            }
            let mut step = OmegaPoly::zero(self.nvars);
            for (e, c) in rem.terms.iter().filter(|(e, _)| e[k] == top) {
                let mut f = e.clone();
                f[k] -= 1;
                step.add_term(f, c / &lead);
            }
            rem = rem.sub(&step.mul(&divisor));
            quot = quot.add(&step);
        }
        rem.is_zero().then_some(quot)
    }

    pub fn eval_exact(&self, w: &[ExactScalar]) -> Result<ExactScalar> {
        if w.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: w.len() });
        }
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in w.iter().zip(e) {
                t = &t * &x.pow(k);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, w: &[f64]) -> Result<f64> {
        if w.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: w.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| e.iter().zip(w).fold(c.to_f64(), |acc, (&k, x)| acc * x.powi(k as i32)))
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FrequencyVector;

    fn w() -> OmegaPoly {
        OmegaPoly::var(1, 0)
    }

    fn c(n: i64) -> OmegaPoly {
        OmegaPoly::constant(1, ExactScalar::from_integer(n))
    }

    #[test]
    fn division_by_form() {
        let alpha = FrequencyVector::new(vec![ExactScalar::one()]).unwrap();
        let (_, f) = LinearForm::new(&alpha, &[1]).unwrap();
        // (1+w)^2 = w^2 + 2w + 1
        let p = w().mul(&w()).add(&w().scale(&ExactScalar::from_integer(2))).add(&c(1));
        let q = p.div_form(&f).unwrap();
        assert_eq!(q, w().add(&c(1)));
        assert!(w().div_form(&f).is_none());
        assert_eq!(OmegaPoly::zero(1).div_form(&f), Some(OmegaPoly::zero(1)));
    }

    #[test]
    fn division_two_variables() {
        let alpha = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2).unwrap()]).unwrap();
        let (_, f) = LinearForm::new(&alpha, &[2, -1]).unwrap();
        let g = OmegaPoly::var(2, 1).add(&OmegaPoly::constant(2, ExactScalar::from_integer(3)));
        let prod = g.mul(&OmegaPoly::from_form(&f));
        assert_eq!(prod.div_form(&f), Some(g.clone()));
        assert!(g.div_form(&f).is_none());
    }

    #[test]
    fn derivative_and_eval() {
        let p = w().pow(3).add(&c(2));
        assert_eq!(p.derivative(0), w().pow(2).scale(&ExactScalar::from_integer(3)));
        assert_eq!(p.eval_f64(&[2.0]).unwrap(), 10.0);
        assert_eq!(p.eval_exact(&[ExactScalar::from_integer(-1)]).unwrap(), ExactScalar::one());
    }
}
