//! Truncated weighted-graded power series in `q`, `p`, `tau` with
//! small-denominator coefficients.
//!
//! A [`Series`] carries its own truncation order: every stored term has
//! weighted degree below it, and nothing is claimed about higher degrees.
//! Operations propagate this order pessimistically, so a result never
//! advertises degrees its inputs could not determine.

mod context;
mod monomial;
mod text;
mod univariate;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use context::RingContext;
pub use monomial::Monomial;
pub use text::{SeriesJson, TermJson};
pub use univariate::PowerSeries;

use crate::error::{Error, Result};
use crate::scalars::{ExactScalar, SdElement};

#[derive(Clone, Debug)]
pub struct Series {
    ctx: Arc<RingContext>,
    terms: BTreeMap<Monomial, SdElement>,
    trunc: u32,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.terms == other.terms
    }
}

impl Series {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Series { ctx: ctx.clone(), terms: BTreeMap::new(), trunc: ctx.trunc() }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Series::constant(ctx, SdElement::one(ctx.dim()))
    }

    pub fn constant(ctx: &Arc<RingContext>, c: SdElement) -> Self {
        Series::monomial(ctx, Monomial::one(ctx.dim()), c)
    }

    pub fn integer(ctx: &Arc<RingContext>, n: i64) -> Self {
        Series::constant(ctx, SdElement::integer(ctx.dim(), n))
    }

    pub fn monomial(ctx: &Arc<RingContext>, m: Monomial, c: SdElement) -> Self {
        Series::from_terms(ctx, [(m, c)])
    }

    /// Sums the given terms; anything at or above the context truncation is dropped.
    pub fn from_terms(ctx: &Arc<RingContext>, terms: impl IntoIterator<Item = (Monomial, SdElement)>) -> Self {
        let mut s = Series::zero(ctx);
        for (m, c) in terms {
            assert_eq!(m.dim(), ctx.dim(), "monomial dimension mismatch");
            s.add_term(m, c);
        }
        s
    }

    pub fn p(ctx: &Arc<RingContext>, i: usize) -> Self {
        Series::monomial(ctx, Monomial::p_var(ctx.dim(), i), SdElement::one(ctx.dim()))
    }

    pub fn q(ctx: &Arc<RingContext>, i: usize) -> Self {
        Series::monomial(ctx, Monomial::q_var(ctx.dim(), i), SdElement::one(ctx.dim()))
    }

    pub fn tau(ctx: &Arc<RingContext>, i: usize) -> Self {
        Series::monomial(ctx, Monomial::t_var(ctx.dim(), i), SdElement::one(ctx.dim()))
    }

    pub fn omega(ctx: &Arc<RingContext>, i: usize) -> Self {
        Series::constant(ctx, SdElement::omega(ctx.dim(), i))
    }

    /// `f_i = p_i q_i − tau_i`, the generators of the Moser ideal.
    pub fn moser_generator(ctx: &Arc<RingContext>, i: usize) -> Self {
        let d = ctx.dim();
        let pq = Monomial::p_var(d, i).mul(&Monomial::q_var(d, i));
        Series::from_terms(ctx, [(pq, SdElement::one(d)), (Monomial::t_var(d, i), SdElement::integer(d, -1))])
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    /// Effective truncation order.
    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, SdElement> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &SdElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// No stored terms (the series is `O(trunc)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&SdElement> {
        self.terms.get(m)
    }

    /// Coefficient of `tau^e`, zero when absent.
    pub fn tau_coeff(&self, e: &[u32]) -> SdElement {
        self.terms.get(&Monomial::tau_power(e.to_vec())).cloned().unwrap_or_else(|| SdElement::zero(self.dim()))
    }

    fn add_term(&mut self, m: Monomial, c: SdElement) {
        if c.is_zero() || m.weighted_degree() >= self.trunc {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, SdElement>, trunc: u32) -> Self {
        let trunc = trunc.min(self.ctx.trunc());
        let terms = terms.into_iter().filter(|(m, _)| m.weighted_degree() < trunc).collect();
        Series { ctx: self.ctx.clone(), terms, trunc }
    }

    /// Lowers the truncation order to `min(trunc, self.trunc)`.
    pub fn truncate(&self, trunc: u32) -> Self {
        self.with_terms(self.terms.clone(), trunc.min(self.trunc))
    }

    /// Moves the series into another context of the same dimension.
    pub fn rebase(&self, ctx: &Arc<RingContext>) -> Result<Self> {
        if ctx.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: ctx.dim(), got: self.dim() });
        }
        let trunc = self.trunc.min(ctx.trunc());
        Ok(Series {
            ctx: ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_degree() < trunc)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            trunc,
        })
    }

    /// Lowest weighted degree present, or `trunc` if there is none.
    pub fn low_degree(&self) -> u32 {
        self.terms.keys().next().map(|m| m.weighted_degree()).unwrap_or(self.trunc).min(self.trunc)
    }

    /// Lowest weighted degree among terms with `q`/`p` content, or `trunc`.
    pub fn qp_low_degree(&self) -> u32 {
        self.terms
            .keys()
            .filter(|m| m.has_qp())
            .map(|m| m.weighted_degree())
            .min()
            .unwrap_or(self.trunc)
            .min(self.trunc)
    }

    /// Highest weighted degree present.
    pub fn top_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weighted_degree()).max()
    }

    pub fn map_coefficients(&self, f: impl Fn(&SdElement) -> SdElement) -> Self {
        let mut out = Series { ctx: self.ctx.clone(), terms: BTreeMap::new(), trunc: self.trunc };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Monomial, &SdElement) -> bool) -> Self {
        Series {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, c)| keep(m, c)).map(|(m, c)| (m.clone(), c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    fn check_ctx(&self, other: &Series) {
        assert!(Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx, "series from different ring contexts");
    }

    pub fn add(&self, other: &Series) -> Series {
        self.check_ctx(other);
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncate(trunc);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Series {
        self.map_coefficients(|c| c.neg())
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &SdElement) -> Series {
        self.map_coefficients(|x| x.mul(c))
    }

    pub fn scale_scalar(&self, c: &ExactScalar) -> Series {
        self.map_coefficients(|x| x.scale(c))
    }

    /// Truncated product; the result is known below
    /// `min(trunc_x + low(y), trunc_y + low(x), N)`.
    pub fn mul(&self, other: &Series) -> Series {
        self.check_ctx(other);
        let trunc = (self.trunc.saturating_add(other.low_degree()))
            .min(other.trunc.saturating_add(self.low_degree()))
            .min(self.ctx.trunc());
        let mut out = Series { ctx: self.ctx.clone(), terms: BTreeMap::new(), trunc };
        for (ma, ca) in &self.terms {
            let da = ma.weighted_degree();
            for (mb, cb) in &other.terms {
                if da + mb.weighted_degree() >= trunc {
                    // terms are graded, later ones are no lower
                    break;
                }
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(&self.ctx);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1/self` by Newton's iteration `y ← y(2 − s y)`; the constant term
    /// must be a nonzero scalar.
    pub fn reciprocal(&self) -> Result<Series> {
        let d = self.dim();
        let c0 = self.coeff(&Monomial::one(d)).and_then(SdElement::as_scalar).ok_or(Error::DivisionByZero)?;
        let mut y = Series::constant(&self.ctx, SdElement::constant(d, c0.inv()?));
        let two = Series::integer(&self.ctx, 2);
        loop {
            let next = y.mul(&two.sub(&self.mul(&y)));
            if next == y {
                return Ok(y);
            }
            y = next;
        }
    }

    /// `[h]_i^j`: the terms of weighted degree `>= i` and `< j` (`None` for `∞`).
    ///
    /// The window is exact when `j` does not exceed the truncation order.
    pub fn window(&self, i: u32, j: Option<u32>) -> Series {
        let (hi, trunc) = match j {
            Some(j) if j <= self.trunc => (j, self.ctx.trunc()),
            _ => (self.trunc, self.trunc),
        };
        Series {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (i..hi).contains(&m.weighted_degree()))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            trunc,
        }
    }

    fn derivative_var(&self, which: u8, i: usize, shift: u32) -> Series {
        let mut out = Series { ctx: self.ctx.clone(), terms: BTreeMap::new(), trunc: self.trunc.saturating_sub(shift) };
        for (m, c) in &self.terms {
            if let Some((k, m2)) = m.lower(which, i) {
                out.add_term(m2, c.scale(&ExactScalar::from_integer(i64::from(k))));
            }
        }
        out
    }

    pub fn d_p(&self, i: usize) -> Series {
        self.derivative_var(0, i, 1)
    }

    pub fn d_q(&self, i: usize) -> Series {
        self.derivative_var(1, i, 1)
    }

    pub fn d_tau(&self, i: usize) -> Series {
        self.derivative_var(2, i, 2)
    }

    /// `∂/∂w_i` acting on the coefficients.
    pub fn d_omega(&self, i: usize) -> Series {
        self.map_coefficients(|c| c.derivative(i))
    }

    /// No `tau` and no `w`: an element of `P`.
    pub fn is_in_p(&self) -> bool {
        self.terms.iter().all(|(m, c)| !m.has_tau() && c.is_constant())
    }

    /// No `q`, `p`: an element of the Poisson centre `R0`.
    pub fn is_in_r0(&self) -> bool {
        self.terms.keys().all(|m| !m.has_qp())
    }

    /// `w`-free coefficients: an element of `Q`.
    pub fn is_omega_free(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    /// The morphism `s`: every `tau_i` replaced by `q_i p_i`.
    pub fn substitute_tau_by_pq(&self) -> Result<Series> {
        if !self.is_omega_free() {
            return Err(Error::OmegaDependent);
        }
        let mut out = Series { ctx: self.ctx.clone(), terms: BTreeMap::new(), trunc: self.trunc };
        let d = self.dim();
        for (m, c) in &self.terms {
            let p: Vec<u32> = m.p().iter().zip(m.t()).map(|(a, e)| a + e).collect();
            let q: Vec<u32> = m.q().iter().zip(m.t()).map(|(b, e)| b + e).collect();
            out.add_term(Monomial::new(p, q, vec![0; d]), c.clone());
        }
        Ok(out)
    }

    /// Inverse of `substitute_tau_by_pq` on diagonal series: `p^a q^a ↦ tau^a`.
    pub fn diagonal_to_tau(&self) -> Result<Series> {
        let d = self.dim();
        let mut out = Series { ctx: self.ctx.clone(), terms: BTreeMap::new(), trunc: self.trunc };
        for (m, c) in &self.terms {
            if !m.is_diagonal() {
                return Err(Error::Invalid(format!("monomial {m} is not diagonal")));
            }
            let t: Vec<u32> = m.p().iter().zip(m.t()).map(|(a, e)| a + e).collect();
            out.add_term(Monomial::new(vec![0; d], vec![0; d], t), c.clone());
        }
        Ok(out)
    }
}

macro_rules! series_ops {
    ($tr:ident, $f:ident) => {
        impl<'a> $tr<&'a Series> for &'a Series {
            type Output = Series;
            fn $f(self, rhs: &Series) -> Series {
                Series::$f(self, rhs)
            }
        }
    };
}
series_ops!(Add, add);
series_ops!(Sub, sub);
series_ops!(Mul, mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_sd, FrequencyVector};

    fn ctx(n: u32) -> Arc<RingContext> {
        RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), n).unwrap()
    }

    fn pq(c: &Arc<RingContext>, a: u32, b: u32) -> Series {
        Series::monomial(c, Monomial::new(vec![a], vec![b], vec![0]), SdElement::one(1))
    }

    fn sd(s: &str) -> SdElement {
        parse_sd(s, 1, None).unwrap()
    }

    #[test]
    fn windows() {
        let c = ctx(10);
        let h = &pq(&c, 1, 1) + &pq(&c, 3, 0);
        assert_eq!(h.window(3, Some(4)), pq(&c, 3, 0));
        assert_eq!(h.window(0, None), h);
        let a0 = pq(&c, 1, 1).scale(&sd("1 + w"));
        let f0 = &(&a0 + &pq(&c, 3, 0)) + &pq(&c, 0, 3);
        assert_eq!(f0.window(3, Some(4)), &pq(&c, 3, 0) + &pq(&c, 0, 3));
        assert_eq!(&f0.window(0, Some(3)) + &f0.window(3, None), f0);
    }

    #[test]
    fn products() {
        let c = ctx(10);
        let f = &pq(&c, 1, 1) - &Series::tau(&c, 0);
        let t = Series::tau(&c, 0);
        let expect = &(&pq(&c, 2, 2) - &(&t * &pq(&c, 1, 1)).scale_scalar(&ExactScalar::from_integer(2))) + &(&t * &t);
        assert_eq!(&f * &f, expect);
        assert_eq!(&f * &Series::one(&c), f);
        let a = &pq(&c, 3, 0) + &pq(&c, 0, 3);
        let b = &pq(&c, 3, 0) - &pq(&c, 0, 3);
        let c12 = ctx(12);
        let a12 = a.rebase(&c12).unwrap();
        let b12 = b.rebase(&c12).unwrap();
        assert_eq!(&a12 * &b12, &pq(&c12, 6, 0) - &pq(&c12, 0, 6));
        // at N = 10 the degree-6 product survives but (p^3+q^3)^3 does not
        assert_eq!((&a * &b).len(), 2);
        assert!(a.pow(4).is_zero());
    }

    #[test]
    fn truncation_is_pessimistic() {
        let c = ctx(10);
        let x = pq(&c, 1, 0).truncate(6);
        let y = pq(&c, 0, 2);
        let z = &x * &y;
        assert_eq!(z.trunc(), 8);
        assert_eq!(x.d_p(0).trunc(), 5);
        assert_eq!(Series::tau(&c, 0).d_tau(0).trunc(), 8);
    }

    #[test]
    fn tau_substitution() {
        let c = ctx(10);
        let t = Series::tau(&c, 0);
        assert_eq!(t.substitute_tau_by_pq().unwrap(), pq(&c, 1, 1));
        let b = &t - &(&t * &t).scale_scalar(&ExactScalar::from_integer(3));
        let expect = &pq(&c, 1, 1) - &pq(&c, 2, 2).scale_scalar(&ExactScalar::from_integer(3));
        assert_eq!(b.substitute_tau_by_pq().unwrap(), expect);
        assert!(Series::moser_generator(&c, 0).substitute_tau_by_pq().unwrap().is_zero());
        assert_eq!(Series::omega(&c, 0).substitute_tau_by_pq(), Err(Error::OmegaDependent));
    }

    #[test]
    fn subrings() {
        let c = ctx(10);
        assert!(pq(&c, 2, 1).is_in_p());
        assert!(!Series::tau(&c, 0).is_in_p());
        assert!(Series::tau(&c, 0).is_in_r0());
        assert!(Series::omega(&c, 0).is_in_r0());
        assert!(!Series::omega(&c, 0).is_omega_free());
    }
}
