//! Classical Birkhoff normal form, degree by degree.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poisson::Derivation;
use crate::scalars::{ExactScalar, SdElement};
use crate::series::{Monomial, PowerSeries, RingContext, Series};

/// Checks that `h` lies in `P` and starts with `Σ alpha_i p_i q_i` exactly.
pub fn check_quadratic(h: &Series) -> Result<()> {
    if !h.is_in_p() {
        return Err(Error::MalformedQuadratic(
            "Hamiltonian must be a polynomial in q, p with constant coefficients".into(),
        ));
    }
    let ctx = h.ctx();
    let mut h0 = Series::zero(ctx);
    for (i, a) in ctx.alpha().components().iter().enumerate() {
        h0 = h0.add(&Series::p(ctx, i).mul(&Series::q(ctx, i)).scale_scalar(a));
    }
    let low = h.window(0, Some(3));
    if low != h0 {
        let diff = low.sub(&h0);
        return Err(Error::MalformedQuadratic(format!(
            "terms below degree 3 differ from sum alpha_i p_i q_i by {diff}"
        )));
    }
    Ok(())
}

/// `p^a q^b ↦ Ham(p^a q^b / (alpha, a − b))` for `a ≠ b`, zero on diagonal monomials.
pub fn j_map(m: &Series) -> Result<Derivation> {
    if !m.is_in_p() {
        return Err(Error::Invalid("j is defined on constant-coefficient polynomials in q, p".into()));
    }
    let ctx = m.ctx();
    let d = ctx.dim();
    let mut ham = Vec::new();
    for (mono, c) in m.iter() {
        if mono.is_diagonal() {
            continue;
        }
        let j = mono.resonance_vector();
        let div = ctx.alpha().pair(&j)?;
        if div.is_zero() {
            return Err(Error::ResonantDivisor(j));
        }
        let s = c.as_scalar().expect("constant coefficient");
        ham.push((mono.clone(), SdElement::constant(d, s.checked_div(&div)?)));
    }
    let ham = Series::from_terms(ctx, ham).truncate(m.trunc());
    Derivation::hamiltonian(ham, m.low_degree() as i32 - 2)
}

/// How the off-diagonal terms of one degree are removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// All terms of degree `k + 3` at once.
    Batch,
    /// One monomial per exponential, in graded order.
    SingleMonomial,
}

#[derive(Clone, Debug)]
pub struct BnfResult {
    /// The normal form written in `tau`.
    pub b: Series,
    pub steps: Vec<Derivation>,
    /// The transformed Hamiltonian, diagonal below the truncation order.
    pub h_final: Series,
}

#[derive(Serialize)]
struct BnfJson {
    d: usize,
    trunc: u32,
    coefficients: Vec<(Vec<u32>, String)>,
    generators: Vec<String>,
}

impl BnfResult {
    /// Coefficient of `tau^e`.
    pub fn coefficient(&self, e: &[u32]) -> SdElement {
        self.b.tau_coeff(e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let js = BnfJson {
            d: self.b.dim(),
            trunc: self.b.trunc(),
            coefficients: self.b.iter().map(|(m, c)| (m.t().to_vec(), c.to_string())).collect(),
            generators: self.steps.iter().map(|v| v.ham().to_string()).collect(),
        };
        serde_json::to_value(js).expect("serializable")
    }
}

/// Runs `H_{k+1} = e^{−v_k} H_k` with `v_k = j([H_k]_{k+3}^{k+4})` below weighted degree `n`.
pub fn bnf_iterate(h: &Series, n: u32) -> Result<BnfResult> {
    bnf_iterate_with(h, n, Schedule::Batch)
}

pub fn bnf_iterate_with(h: &Series, n: u32, schedule: Schedule) -> Result<BnfResult> {
    if h.trunc() < n {
        return Err(Error::WindowUnderflow { needed: n, available: h.trunc() });
    }
    let ctx = h.ctx().with_trunc(n)?;
    let mut hk = h.rebase(&ctx)?;
    check_quadratic(&hk)?;
    let mut steps = Vec::new();
    for k in 0..n.saturating_sub(3) {
        let deg = k + 3;
        match schedule {
            Schedule::Batch => {
                let v = j_map(&hk.window(deg, Some(deg + 1)))?;
                if !v.is_zero() {
                    hk = v.exp_apply(&hk)?;
                    steps.push(v);
                }
            }
            Schedule::SingleMonomial => {
                let targets: Vec<Monomial> = hk
                    .window(deg, Some(deg + 1))
                    .iter()
                    .filter(|(m, _)| !m.is_diagonal())
                    .map(|(m, _)| m.clone())
                    .collect();
                for m in targets {
                    let Some(c) = hk.coeff(&m).cloned() else { continue };
                    let v = j_map(&Series::monomial(&ctx, m, c))?;
                    hk = v.exp_apply(&hk)?;
                    steps.push(v);
                }
            }
        }
    }
    let b = hk.diagonal_to_tau()?;
    Ok(BnfResult { b, steps, h_final: hk })
}

/// `b = ∇B(tau)`.
pub fn frequency_map(b: &Series) -> Vec<Series> {
    (0..b.dim()).map(|i| b.d_tau(i)).collect()
}

/// `B(tau)` for `d = 1` as a power series in `tau`, coefficients through `tau^order`.
pub fn tau_power_series(b: &Series, order: u32) -> Result<PowerSeries> {
    if b.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: b.dim() });
    }
    if b.trunc() <= 2 * order {
        return Err(Error::WindowUnderflow { needed: 2 * order + 1, available: b.trunc() });
    }
    let mut c = Vec::with_capacity(order as usize + 1);
    for k in 0..=order {
        let x = b.tau_coeff(&[k]);
        c.push(x.as_scalar().ok_or(Error::OmegaDependent)?);
    }
    Ok(PowerSeries::new(c))
}

/// `2F1(a, b; c; z x)` through `x^(len − 1)`.
pub fn hypergeometric_2f1(
    a: &ExactScalar,
    b: &ExactScalar,
    c: &ExactScalar,
    z: &ExactScalar,
    len: usize,
) -> Result<PowerSeries> {
    let mut out = Vec::with_capacity(len);
    let mut term = ExactScalar::one();
    for k in 0..len {
        out.push(term.clone());
        let kk = ExactScalar::from_integer(k as i64);
        let num = &(&(a + &kk) * &(b + &kk)) * z;
        let den = &(c + &kk) * &(&kk + &ExactScalar::one());
        term = &term * &num.checked_div(&den)?;
    }
    Ok(PowerSeries::new(out))
}

/// The inverse of the anharmonic oscillator's normal form, `tau(b)`, through `b^order`.
///
/// Its derivative is `2F1(1/3, 2/3; 1; 27 b)`, so `tau = b · 2F1(1/3, 2/3; 2; 27 b)`.
pub fn hypergeometric_inverse(order: u32) -> PowerSeries {
    let third = ExactScalar::from_ratio(1, 3);
    let two_thirds = ExactScalar::from_ratio(2, 3);
    let f = hypergeometric_2f1(
        &third,
        &two_thirds,
        &ExactScalar::from_integer(2),
        &ExactScalar::from_integer(27),
        order as usize,
    )
    .expect("nonzero lower parameter");
    let mut c = vec![ExactScalar::zero()];
    c.extend(f.coeffs().iter().cloned());
    PowerSeries::new(c)
}

/// Composes the hypergeometric inverse with `B` and checks the result is `tau` through `order`.
pub fn verify_hypergeometric_inverse(b: &Series, order: u32) -> Result<bool> {
    let bs = tau_power_series(b, order)?;
    let inv = hypergeometric_inverse(order);
    Ok(inv.compose(&bs)? == PowerSeries::var(order as usize + 1))
}

/// The anharmonic oscillator `pq + p^3 + q^3` with `alpha = 1`.
pub fn anharmonic_oscillator(trunc: u32) -> Result<Series> {
    let ctx = RingContext::new(crate::scalars::FrequencyVector::from_integers(&[1])?, trunc)?;
    Ok(cubic_oscillator(&ctx))
}

fn cubic_oscillator(ctx: &Arc<RingContext>) -> Series {
    let p = Series::p(ctx, 0);
    let q = Series::q(ctx, 0);
    p.mul(&q).add(&p.pow(3)).add(&q.pow(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FrequencyVector;

    #[test]
    fn j_on_cubic() {
        let ctx = RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), 8).unwrap();
        let p = Series::p(&ctx, 0);
        let q = Series::q(&ctx, 0);
        let v = j_map(&p.pow(3).add(&q.pow(3))).unwrap();
        let third = ExactScalar::from_ratio(1, 3);
        assert_eq!(v.ham(), &p.pow(3).sub(&q.pow(3)).scale_scalar(&third));
        assert!(j_map(&p.pow(2).mul(&q.pow(2))).unwrap().is_zero());
        let v = j_map(&p.pow(4).mul(&q)).unwrap();
        assert_eq!(v.ham(), &p.pow(4).mul(&q).scale_scalar(&third));
    }

    #[test]
    fn anharmonic_low_order() {
        let h = anharmonic_oscillator(10).unwrap();
        let r = bnf_iterate(&h, 10).unwrap();
        let ctx = r.b.ctx().clone();
        let t = Series::tau(&ctx, 0);
        let expect = t
            .sub(&t.pow(2).scale_scalar(&ExactScalar::from_integer(3)))
            .sub(&t.pow(3).scale_scalar(&ExactScalar::from_integer(12)))
            .sub(&t.pow(4).scale_scalar(&ExactScalar::from_integer(105)));
        assert_eq!(r.b, expect);
        assert_eq!(r.b.substitute_tau_by_pq().unwrap(), r.h_final);
        assert!(verify_hypergeometric_inverse(&r.b, 4).unwrap());
    }

    #[test]
    fn already_normal() {
        let ctx = RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), 8).unwrap();
        let pq = Series::p(&ctx, 0).mul(&Series::q(&ctx, 0));
        let r = bnf_iterate(&pq.add(&pq.pow(2)), 8).unwrap();
        assert!(r.steps.is_empty());
        let t = Series::tau(&ctx, 0);
        assert_eq!(r.b, t.add(&t.pow(2)));
        let b = frequency_map(&r.b);
        assert_eq!(b[0], Series::one(&ctx).add(&t.scale_scalar(&ExactScalar::from_integer(2))).truncate(6));
    }

    #[test]
    fn malformed_quadratic() {
        let ctx = RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), 8).unwrap();
        let h = Series::p(&ctx, 0).pow(2);
        assert!(matches!(bnf_iterate(&h, 8), Err(Error::MalformedQuadratic(_))));
    }

    #[test]
    fn hypergeometric_coefficients() {
        assert_eq!(hypergeometric_inverse(4), PowerSeries::from_integers(&[0, 1, 3, 30, 420]));
        let third = ExactScalar::from_ratio(1, 3);
        let f = hypergeometric_2f1(&third, &(&third + &third), &ExactScalar::one(), &ExactScalar::from_integer(27), 4)
            .unwrap();
        assert_eq!(f, PowerSeries::from_integers(&[1, 6, 90, 1680]));
        assert_eq!(hypergeometric_inverse(4).derivative(), f);
    }
}
