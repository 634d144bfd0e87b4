//! Seeded random series for property tests and randomized verification.

use std::sync::Arc;

use rand::Rng;

use crate::scalars::{LinearForm, SdElement};
use crate::series::{Monomial, RingContext, Series};

/// Shape of the random series produced by [`SeriesSampler::sample`].
#[derive(Clone, Debug)]
pub struct SeriesSampler {
    pub min_degree: u32,
    pub max_degree: u32,
    pub terms: usize,
    pub coef_range: i64,
    pub with_tau: bool,
    pub with_qp: bool,
    pub with_omega: bool,
    pub with_denominators: bool,
}

impl Default for SeriesSampler {
    fn default() -> Self {
        SeriesSampler {
            min_degree: 1,
            max_degree: 5,
            terms: 4,
            coef_range: 3,
            with_tau: true,
            with_qp: true,
            with_omega: true,
            with_denominators: true,
        }
    }
}

impl SeriesSampler {
    /// Polynomials in `p`, `q` with integer coefficients.
    pub fn phase_space(min_degree: u32, max_degree: u32, terms: usize) -> Self {
        SeriesSampler {
            min_degree,
            max_degree,
            terms,
            with_tau: false,
            with_omega: false,
            with_denominators: false,
            ..Default::default()
        }
    }

    /// Elements of the Poisson centre (`tau`, `w` only).
    pub fn central(min_degree: u32, max_degree: u32, terms: usize) -> Self {
        SeriesSampler { min_degree, max_degree, terms, with_qp: false, ..Default::default() }
    }

    pub fn sample<R: Rng + ?Sized>(&self, ctx: &Arc<RingContext>, rng: &mut R) -> Series {
        let mut terms = Vec::with_capacity(self.terms);
        for _ in 0..self.terms {
            let Some(m) = self.monomial(ctx.dim(), rng) else { continue };
            if m.weighted_degree() >= ctx.trunc() {
                continue;
            }
            terms.push((m, self.coefficient(ctx, rng)));
        }
        Series::from_terms(ctx, terms)
    }

    fn monomial<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Option<Monomial> {
        let deg = rng.gen_range(self.min_degree..=self.max_degree);
        let mut p = vec![0; d];
        let mut q = vec![0; d];
        let mut t = vec![0; d];
        let mut rest = deg;
        if !self.with_qp {
            if deg % 2 == 1 || !self.with_tau {
                return if deg == 0 { Some(Monomial::one(d)) } else { None };
            }
        } else if self.with_tau && rest >= 2 {
            let e = rng.gen_range(0..=rest / 2);
            for _ in 0..e {
                t[rng.gen_range(0..d)] += 1;
            }
            rest -= 2 * e;
        }
        if !self.with_qp {
            for _ in 0..deg / 2 {
                t[rng.gen_range(0..d)] += 1;
            }
            return Some(Monomial::new(p, q, t));
        }
        for _ in 0..rest {
            let slot = rng.gen_range(0..2 * d);
            if slot < d {
                p[slot] += 1;
            } else {
                q[slot - d] += 1;
            }
        }
        Some(Monomial::new(p, q, t))
    }

    fn coefficient<R: Rng + ?Sized>(&self, ctx: &Arc<RingContext>, rng: &mut R) -> SdElement {
        let d = ctx.dim();
        let mut n = 0;
        while n == 0 {
            n = rng.gen_range(-self.coef_range..=self.coef_range);
        }
        let mut c = SdElement::integer(d, n);
        if self.with_omega && rng.gen_bool(0.5) {
            let shift = SdElement::integer(d, rng.gen_range(-1..=1));
            c = c.mul(&SdElement::omega(d, rng.gen_range(0..d)).add(&shift));
        }
        if self.with_denominators && rng.gen_bool(0.5) {
            let j: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
            if let Ok((_, form)) = LinearForm::new(ctx.alpha(), &j) {
                c = c.div_form(&form, rng.gen_range(1..=2));
            }
        }
        c
    }

    /// A random element of `I^2`: a sum of `coef · f_i f_j` with sampled coefficients.
    pub fn sample_ideal_square<R: Rng + ?Sized>(&self, ctx: &Arc<RingContext>, rng: &mut R) -> Series {
        let d = ctx.dim();
        let mut out = Series::zero(ctx);
        for _ in 0..self.terms.max(1) {
            let i = rng.gen_range(0..d);
            let j = rng.gen_range(0..d);
            let ff = Series::moser_generator(ctx, i).mul(&Series::moser_generator(ctx, j));
            let mut inner = self.clone();
            inner.terms = 1;
            inner.min_degree = self.min_degree.saturating_sub(4);
            inner.max_degree = self.max_degree.saturating_sub(4).max(inner.min_degree);
            let coef = inner.sample(ctx, rng);
            let coef = if coef.is_zero() { Series::integer(ctx, 1) } else { coef };
            out = out.add(&coef.mul(&ff));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FrequencyVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_shape() {
        let ctx = RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = SeriesSampler::phase_space(3, 5, 4).sample(&ctx, &mut rng);
            assert!(x.is_in_p());
            assert!(x.iter().all(|(m, _)| (3..=5).contains(&m.weighted_degree())));
            let c = SeriesSampler::central(2, 6, 3).sample(&ctx, &mut rng);
            assert!(c.is_in_r0());
            let t = SeriesSampler::default().sample_ideal_square(&ctx, &mut rng);
            assert!(t.low_degree() >= 4);
        }
    }
}
