//! The small denominator ring: polynomials in `w` localized at resonance forms.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::ExactScalar;
use super::frequency::LinearForm;
use super::poly::OmegaPoly;
use crate::error::{Error, Result};

/// Distance to a resonance hyperplane below which numeric evaluation refuses.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// `numerator / Π form^k` in canonical form: no denominator factor divides
/// the numerator, and zero carries an empty denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SdElement {
    num: OmegaPoly,
    den: BTreeMap<LinearForm, u32>,
}

impl SdElement {
    pub fn zero(d: usize) -> Self {
        SdElement { num: OmegaPoly::zero(d), den: BTreeMap::new() }
    }

    pub fn one(d: usize) -> Self {
        SdElement::constant(d, ExactScalar::one())
    }

    pub fn constant(d: usize, c: ExactScalar) -> Self {
        SdElement { num: OmegaPoly::constant(d, c), den: BTreeMap::new() }
    }

    pub fn integer(d: usize, n: i64) -> Self {
        SdElement::constant(d, ExactScalar::from_integer(n))
    }

    pub fn omega(d: usize, i: usize) -> Self {
        SdElement::from_poly(OmegaPoly::var(d, i))
    }

    pub fn from_poly(num: OmegaPoly) -> Self {
        SdElement { num, den: BTreeMap::new() }
    }

    /// `num / Π den`, canonicalized.
    pub fn from_parts(num: OmegaPoly, den: impl IntoIterator<Item = (LinearForm, u32)>) -> Self {
        let mut out = SdElement { num, den: BTreeMap::new() };
        for (f, k) in den {
            if k > 0 {
                *out.den.entry(f).or_insert(0) += k;
            }
        }
        out.normalize()
    }

    /// `1 / form^k`.
    pub fn inverse_form(form: &LinearForm, k: u32) -> Self {
        SdElement::from_parts(OmegaPoly::one(form.dim()), [(form.clone(), k)])
    }

    pub fn dim(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &OmegaPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// True when the element does not depend on `w`.
    pub fn is_constant(&self) -> bool {
        self.den.is_empty() && self.num.is_constant()
    }

    pub fn as_scalar(&self) -> Option<ExactScalar> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let forms: Vec<LinearForm> = self.den.keys().cloned().collect();
        for f in forms {
            let mut k = self.den[&f];
            while k > 0 {
                match self.num.div_form(&f) {
                    Some(q) => {
                        self.num = q;
                        k -= 1;
                    }
                    None => break,
                }
            }
            if k == 0 {
                self.den.remove(&f);
            } else {
                self.den.insert(f, k);
            }
        }
        self
    }

    /// Numerator rewritten over the (larger) denominator `target`.
    fn lift(&self, target: &BTreeMap<LinearForm, u32>) -> OmegaPoly {
        let mut n = self.num.clone();
        for (f, &k) in target {
            let have = self.den.get(f).copied().unwrap_or(0);
            for _ in have..k {
                n = n.mul_form(f);
            }
        }
        n
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "small denominator ring dimension mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_dim(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return SdElement { num: self.num.add(&other.num), den: self.den.clone() }.normalize();
        }
        let mut lcm = self.den.clone();
        for (f, &k) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let num = self.lift(&lcm).add(&other.lift(&lcm));
        SdElement { num, den: lcm }.normalize()
    }

    pub fn neg(&self) -> Self {
        SdElement { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_dim(other);
        if self.is_zero() || other.is_zero() {
            return SdElement::zero(self.dim());
        }
        let mut den = self.den.clone();
        for (f, &k) in &other.den {
            *den.entry(f.clone()).or_insert(0) += k;
        }
        let out = SdElement { num: self.num.mul(&other.num), den };
        if self.den.is_empty() && other.den.is_empty() {
            out
        } else {
            out.normalize()
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return SdElement::zero(self.dim());
        }
        SdElement { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn div_scalar(&self, s: &ExactScalar) -> Result<Self> {
        Ok(self.scale(&s.inv()?))
    }

    /// Division by `form^k`.
    pub fn div_form(&self, form: &LinearForm, k: u32) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut den = self.den.clone();
        *den.entry(form.clone()).or_insert(0) += k;
        SdElement { num: self.num.clone(), den }.normalize()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = SdElement::one(self.dim());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂w_i` via the logarithmic derivative of the factored denominator.
    pub fn derivative(&self, i: usize) -> Self {
        let d = self.dim();
        let mut out = SdElement { num: self.num.derivative(i), den: self.den.clone() }.normalize();
        for (f, &k) in &self.den {
            let ji = f.j()[i];
            if ji == 0 {
                continue;
            }
            let c = ExactScalar::from_integer(-(i64::from(k)) * ji);
            let mut den = self.den.clone();
            *den.get_mut(f).unwrap() += 1;
            let term = SdElement { num: self.num.scale(&c), den }.normalize();
            out = out.add(&term);
        }
        debug_assert_eq!(out.dim(), d);
        out
    }

    pub fn eval_exact(&self, w: &[ExactScalar]) -> Result<ExactScalar> {
        let mut v = self.num.eval_exact(w)?;
        for (f, &k) in &self.den {
            let x = f.eval_exact(w);
            if x.is_zero() {
                return Err(Error::PoleProximity { form: f.j().to_vec(), tol: 0.0 });
            }
            v = v.checked_div(&x.pow(k))?;
        }
        Ok(v)
    }

    pub fn eval_f64(&self, w: &[f64]) -> Result<f64> {
        let mut v = self.num.eval_f64(w)?;
        for (f, &k) in &self.den {
            let x = f.eval_f64(w);
            if x.abs() < POLE_TOLERANCE {
                return Err(Error::PoleProximity { form: f.j().to_vec(), tol: POLE_TOLERANCE });
            }
            v /= x.powi(k as i32);
        }
        Ok(v)
    }

    /// Value at `w = 0`; fails when a form vanishes there.
    pub fn value_at_origin(&self) -> Result<ExactScalar> {
        let mut v = self.num.constant_term();
        for (f, &k) in &self.den {
            if f.constant().is_zero() {
                return Err(Error::PoleAtOrigin(f.j().to_vec()));
            }
            v = v.checked_div(&f.constant().pow(k))?;
        }
        Ok(v)
    }
}

macro_rules! sd_ops {
    ($tr:ident, $f:ident) => {
        impl<'a> $tr<&'a SdElement> for &'a SdElement {
            type Output = SdElement;
            fn $f(self, rhs: &SdElement) -> SdElement {
                SdElement::$f(self, rhs)
            }
        }
    };
}
sd_ops!(Add, add);
sd_ops!(Sub, sub);
sd_ops!(Mul, mul);

impl Neg for &SdElement {
    type Output = SdElement;
    fn neg(self) -> SdElement {
        SdElement::neg(self)
    }
}
