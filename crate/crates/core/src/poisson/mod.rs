//! Poisson bracket and derivations `Ham(h) + Σ a_i ∂w_i + Σ b_i ∂tau_i`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::SeriesSampler;
use crate::scalars::{ExactScalar, SdElement};
use crate::series::{RingContext, Series};

/// `{f, g} = Σ ∂q_i f ∂p_i g − ∂p_i f ∂q_i g`; `tau` and `w` are central.
pub fn bracket(f: &Series, g: &Series) -> Series {
    let mut out = Series::zero(f.ctx()).truncate(f.trunc().min(g.trunc()));
    for i in 0..f.dim() {
        let fq = f.d_q(i);
        let fp = f.d_p(i);
        let gq = g.d_q(i);
        let gp = g.d_p(i);
        out = out.add(&fq.mul(&gp)).sub(&fp.mul(&gq));
    }
    out
}

/// An element of `Ham(R) ⊕ Der(R0)` with a validated lower bound on its degree shift.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    ham: Series,
    d_omega: Vec<Series>,
    d_tau: Vec<Series>,
    order: i32,
}

impl Derivation {
    /// The zero derivation, declared with order 1.
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        let d = ctx.dim();
        Derivation {
            ham: Series::zero(ctx),
            d_omega: vec![Series::zero(ctx); d],
            d_tau: vec![Series::zero(ctx); d],
            order: 1,
        }
    }

    /// Builds `{−, ham} + Σ d_omega_i ∂w_i + Σ d_tau_i ∂tau_i`.
    ///
    /// Central terms of `ham` generate nothing and are dropped; `order` must not
    /// exceed the order the components actually have.
    pub fn new(ham: Series, d_omega: Vec<Series>, d_tau: Vec<Series>, order: i32) -> Result<Self> {
        let d = ham.dim();
        for v in [&d_omega, &d_tau] {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
        }
        if let Some(x) = d_omega.iter().chain(&d_tau).find(|x| !x.is_in_r0()) {
            return Err(Error::Invalid(format!("coefficient {x} is not central")));
        }
        let ham = ham.filter(|m, _| m.has_qp());
        let v = Derivation { ham, d_omega, d_tau, order };
        v.with_order(order)
    }

    pub fn hamiltonian(ham: Series, order: i32) -> Result<Self> {
        let ctx = ham.ctx().clone();
        let d = ctx.dim();
        Derivation::new(ham, vec![Series::zero(&ctx); d], vec![Series::zero(&ctx); d], order)
    }

    /// Same derivation with a different declared order, rechecked.
    pub fn with_order(mut self, order: i32) -> Result<Self> {
        if let Some(actual) = self.actual_order() {
            if order > actual {
                return Err(Error::OrderViolation { declared: order, actual });
            }
        }
        self.order = order;
        Ok(self)
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        self.ham.ctx()
    }

    pub fn ham(&self) -> &Series {
        &self.ham
    }

    pub fn d_omega(&self) -> &[Series] {
        &self.d_omega
    }

    pub fn d_tau(&self) -> &[Series] {
        &self.d_tau
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.ham.is_zero() && self.d_omega.iter().chain(&self.d_tau).all(Series::is_zero)
    }

    /// Smallest degree shift of any component, `None` for the zero derivation.
    pub fn actual_order(&self) -> Option<i32> {
        let low = |s: &Series| s.terms().keys().next().map(|m| m.weighted_degree() as i32);
        let ham = self.ham.terms().keys().map(|m| m.weighted_degree() as i32 - 2).min();
        let om = self.d_omega.iter().filter_map(low).min();
        let ta = self.d_tau.iter().filter_map(low).map(|k| k - 2).min();
        [ham, om, ta].into_iter().flatten().min()
    }

    /// `v(f) = {f, ham} + Σ a_i ∂w_i f + Σ b_i ∂tau_i f`.
    pub fn apply(&self, f: &Series) -> Series {
        let mut out = bracket(f, &self.ham);
        for i in 0..f.dim() {
            if !self.d_omega[i].is_zero() {
                out = out.add(&self.d_omega[i].mul(&f.d_omega(i)));
            }
            if !self.d_tau[i].is_zero() {
                out = out.add(&self.d_tau[i].mul(&f.d_tau(i)));
            }
        }
        out
    }

    /// `e^{−v} f = Σ (−1)^k v^k(f) / k!`, summed until the terms fall below the truncation.
    pub fn exp_apply(&self, f: &Series) -> Result<Series> {
        if self.order < 1 {
            return Err(Error::NonPositiveOrder(self.order));
        }
        let mut sum = f.clone();
        let mut term = f.clone();
        let mut k = 1i64;
        loop {
            term = self.apply(&term).scale_scalar(&ExactScalar::from_ratio(-1, k));
            if term.is_zero() || term.low_degree() >= sum.trunc() {
                break;
            }
            sum = sum.add(&term);
            k += 1;
        }
        Ok(sum)
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let zip = |a: &[Series], b: &[Series]| a.iter().zip(b).map(|(x, y)| x.add(y)).collect();
        Derivation {
            ham: self.ham.add(&other.ham),
            d_omega: zip(&self.d_omega, &other.d_omega),
            d_tau: zip(&self.d_tau, &other.d_tau),
            order: self.order.min(other.order),
        }
    }

    pub fn neg(&self) -> Derivation {
        self.scale(&SdElement::integer(self.ctx().dim(), -1))
    }

    /// Multiplies every component by a constant of the small denominator ring.
    pub fn scale(&self, c: &SdElement) -> Derivation {
        Derivation {
            ham: self.ham.scale(c),
            d_omega: self.d_omega.iter().map(|x| x.scale(c)).collect(),
            d_tau: self.d_tau.iter().map(|x| x.scale(c)).collect(),
            order: self.order,
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ctx().dim();
        let name = |v: &str, i: usize| if d == 1 { v.to_string() } else { format!("{v}{}", i + 1) };
        let mut parts = Vec::new();
        if !self.ham.is_zero() {
            parts.push(format!("Ham({})", self.ham));
        }
        for (v, comps) in [("w", &self.d_omega), ("t", &self.d_tau)] {
            for (i, c) in comps.iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format!("({c}) ∂{}", name(v, i)));
                }
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Checks `e^{−v}{f,g} = {e^{−v}f, e^{−v}g}` on random pairs.
///
/// Both sides are compared below the truncation order they can both certify.
pub fn is_poisson_automorphism_sample<R: Rng + ?Sized>(v: &Derivation, trials: usize, rng: &mut R) -> Result<bool> {
    let ctx = v.ctx();
    let sampler = SeriesSampler { min_degree: 1, max_degree: 4, terms: 3, ..Default::default() };
    for _ in 0..trials {
        let f = sampler.sample(ctx, rng);
        let g = sampler.sample(ctx, rng);
        let lhs = v.exp_apply(&bracket(&f, &g))?;
        let rhs = bracket(&v.exp_apply(&f)?, &v.exp_apply(&g)?);
        let n = lhs.trunc().min(rhs.trunc());
        if lhs.truncate(n) != rhs.truncate(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_sd, FrequencyVector};
    use crate::series::Monomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(n: u32) -> Arc<RingContext> {
        RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), n).unwrap()
    }

    fn pq(c: &Arc<RingContext>, a: u32, b: u32) -> Series {
        Series::monomial(c, Monomial::new(vec![a], vec![b], vec![0]), SdElement::one(1))
    }

    fn int(c: &Arc<RingContext>, n: i64, s: &Series) -> Series {
        s.scale(&SdElement::integer(c.dim(), n))
    }

    fn sd(s: &str) -> SdElement {
        parse_sd(s, 1, None).unwrap()
    }

    #[test]
    fn cubic_bracket() {
        let c = ctx(10);
        let h = (&pq(&c, 3, 0) - &pq(&c, 0, 3)).scale_scalar(&ExactScalar::from_ratio(1, 3));
        assert_eq!(bracket(&pq(&c, 1, 1), &h), &pq(&c, 3, 0) + &pq(&c, 0, 3));
        let x = &pq(&c, 2, 1) + &pq(&c, 0, 3);
        assert!(bracket(&x, &x).is_zero());
    }

    #[test]
    fn frequency_eigenvalues() {
        let alpha = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2).unwrap()]).unwrap();
        let c = RingContext::new(alpha, 8).unwrap();
        let h0 = Series::p(&c, 0)
            .mul(&Series::q(&c, 0))
            .add(&Series::p(&c, 1).mul(&Series::q(&c, 1)).scale_scalar(&ExactScalar::sqrt(2).unwrap()));
        let m = Series::monomial(&c, Monomial::new(vec![2, 0], vec![0, 1], vec![0, 0]), SdElement::one(2));
        // (alpha, (2, -1)) = 2 - √2
        let expect = m.scale_scalar(&(ExactScalar::from_integer(2) - ExactScalar::sqrt(2).unwrap()));
        assert_eq!(bracket(&h0, &m), expect);
    }

    #[test]
    fn omega_derivation_on_a0() {
        let c = ctx(10);
        let a0 = pq(&c, 1, 1).scale(&sd("1 + w"));
        let coef = Series::tau(&c, 0).scale(&sd("-6/(1 + w)"));
        let v = Derivation::new(Series::zero(&c), vec![coef], vec![Series::zero(&c)], 2).unwrap();
        assert_eq!(v.apply(&a0), pq(&c, 1, 1).scale(&sd("-6/(1 + w)")).mul(&Series::tau(&c, 0)));
        assert!(v.apply(&Series::one(&c)).is_zero());
    }

    #[test]
    fn first_birkhoff_step() {
        let c = ctx(6);
        let h = &(&pq(&c, 1, 1) + &pq(&c, 3, 0)) + &pq(&c, 0, 3);
        let gen = (&pq(&c, 3, 0) - &pq(&c, 0, 3)).scale_scalar(&ExactScalar::from_ratio(1, 3));
        let v = Derivation::hamiltonian(gen, 1).unwrap();
        let h1 = v.exp_apply(&h).unwrap();
        let expect = &(&pq(&c, 1, 1) - &int(&c, 3, &pq(&c, 2, 2))) + &int(&c, 4, &(&pq(&c, 4, 1) + &pq(&c, 1, 4)));
        assert_eq!(h1, expect);
    }

    #[test]
    fn exponential_of_omega_flow() {
        let c = ctx(4);
        let coef = Series::tau(&c, 0).scale(&sd("6/(1 + w)"));
        // e^{-v} with v = -(6tau/(1+w)) ∂w
        let v = Derivation::new(Series::zero(&c), vec![coef.neg()], vec![Series::zero(&c)], 2).unwrap();
        let g = v.exp_apply(&Series::omega(&c, 0)).unwrap();
        assert_eq!(g, Series::omega(&c, 0).add(&coef));
        assert_eq!(Derivation::zero(&c).exp_apply(&g).unwrap(), g);
    }

    #[test]
    fn order_is_checked() {
        let c = ctx(10);
        assert!(matches!(
            Derivation::hamiltonian(pq(&c, 3, 0), 2),
            Err(Error::OrderViolation { declared: 2, actual: 1 })
        ));
        let v = Derivation::hamiltonian(pq(&c, 1, 1), 0).unwrap();
        assert_eq!(v.exp_apply(&pq(&c, 1, 0)), Err(Error::NonPositiveOrder(0)));
        // central parts of the generator are dropped
        let v = Derivation::hamiltonian(Series::tau(&c, 0).add(&pq(&c, 3, 0)), 1).unwrap();
        assert_eq!(v.ham(), &pq(&c, 3, 0));
    }

    #[test]
    fn automorphism_samples() {
        let c = ctx(8);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = Derivation::hamiltonian(pq(&c, 3, 0), 1).unwrap();
        assert!(is_poisson_automorphism_sample(&v, 20, &mut rng).unwrap());
        let v = Derivation::new(Series::zero(&c), vec![Series::tau(&c, 0)], vec![Series::zero(&c)], 2).unwrap();
        assert!(is_poisson_automorphism_sample(&v, 10, &mut rng).unwrap());
        let v = Derivation::new(pq(&c, 2, 2), vec![Series::tau(&c, 0)], vec![Series::zero(&c)], 2).unwrap();
        assert!(is_poisson_automorphism_sample(&v, 10, &mut rng).unwrap());
    }
}
