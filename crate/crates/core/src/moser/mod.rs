//! The Moser ideal `I = <p_i q_i − tau_i>`, its projections, and the
//! homological operators `L` and `j_A`.

mod iadic;

use std::sync::Arc;

pub use iadic::{f_power, iadic_decompose, project_moser, split_r0_i2, IadicForm, IdealSplit, MoserProjection};

use crate::error::{Error, Result};
use crate::poisson::Derivation;
use crate::scalars::{ExactScalar, LinearForm, SdElement};
use crate::series::{Monomial, RingContext, Series};

/// `A0 = Σ (alpha_i + w_i) p_i q_i`.
pub fn a0(ctx: &Arc<RingContext>) -> Series {
    let d = ctx.dim();
    let mut out = Series::zero(ctx);
    for (i, a) in ctx.alpha().components().iter().enumerate() {
        let c = SdElement::constant(d, a.clone()).add(&SdElement::omega(d, i));
        out = out.add(&Series::p(ctx, i).mul(&Series::q(ctx, i)).scale(&c));
    }
    out
}

/// The right inverse of `v ↦ v(A0)`, defined monomial by monomial.
///
/// `c tau^e p^a q^b` with `a ≠ b` goes to `Ham(c tau^e p^a q^b / (alpha + w, a − b))`;
/// `c tau^e (pq)^a` goes to `c tau^e Σ_i ∂(tau^a)/∂tau_i ∂w_i`.
pub fn homological_l(m: &Series) -> Result<Derivation> {
    let ctx = m.ctx().clone();
    let d = ctx.dim();
    let mut ham = Vec::new();
    let mut grad: Vec<Vec<(Monomial, SdElement)>> = vec![Vec::new(); d];
    for (mono, c) in m.iter() {
        if !mono.is_diagonal() {
            let (g, form) = LinearForm::new(ctx.alpha(), &mono.resonance_vector())?;
            let coef = c.div_form(&form, 1).scale(&ExactScalar::from_ratio(1, g));
            ham.push((mono.clone(), coef));
            continue;
        }
        let a = mono.p();
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            let mut t: Vec<u32> = mono.t().iter().zip(a).map(|(e, k)| e + k).collect();
            t[i] -= 1;
            let coef = c.scale(&ExactScalar::from_integer(i64::from(a[i])));
            grad[i].push((Monomial::tau_power(t), coef));
        }
    }
    let trunc = m.trunc();
    let ham = Series::from_terms(&ctx, ham).truncate(trunc);
    let d_omega = grad.into_iter().map(|g| Series::from_terms(&ctx, g).truncate(trunc.saturating_sub(2))).collect();
    let d_tau = vec![Series::zero(&ctx); d];
    Derivation::new(ham, d_omega, d_tau, m.low_degree() as i32 - 2)
}

/// `j_A(m) = L(m − L(m)(T))` for `A = A0 + T`, `T ∈ I^2`.
pub fn j_a(m: &Series, t: &Series) -> Result<Derivation> {
    if !split_r0_i2(t).in_i2() {
        return Err(Error::NotInIdealSquare);
    }
    let v = homological_l(m)?;
    if t.is_zero() {
        return Ok(v);
    }
    let corrected = m.sub(&v.apply(t));
    let order = v.order();
    homological_l(&corrected)?.with_order(order)
}

/// `t = j_A(m)(A0 + T) − m`.
pub fn homological_remainder(m: &Series, t: &Series) -> Result<Series> {
    let v = j_a(m, t)?;
    let a = a0(m.ctx()).add(t);
    Ok(v.apply(&a).sub(m))
}

/// Whether `j_A(m)(A0 + T) − m` lies in `R0 + I^2`.
pub fn verify_homological(m: &Series, t: &Series) -> Result<bool> {
    Ok(split_r0_i2(&homological_remainder(m, t)?).in_r0_plus_i2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_sd, FrequencyVector};

    fn ctx() -> Arc<RingContext> {
        RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), 10).unwrap()
    }

    fn pq(c: &Arc<RingContext>, a: u32, b: u32) -> Series {
        Series::monomial(c, Monomial::new(vec![a], vec![b], vec![0]), SdElement::one(1))
    }

    fn sd(s: &str) -> SdElement {
        parse_sd(s, 1, None).unwrap()
    }

    #[test]
    fn l_on_cubic() {
        let c = ctx();
        let v = homological_l(&pq(&c, 3, 0).add(&pq(&c, 0, 3))).unwrap();
        let expect = pq(&c, 3, 0).sub(&pq(&c, 0, 3)).scale(&sd("1/3/(1 + w)"));
        assert_eq!(v.ham(), &expect);
        assert_eq!(v.order(), 1);
        assert!(v.d_omega()[0].is_zero());
        assert!(homological_l(&Series::zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn l_on_square() {
        let c = ctx();
        let v = homological_l(&pq(&c, 2, 2).scale(&sd("-3/(1 + w)"))).unwrap();
        assert!(v.ham().is_zero());
        assert_eq!(v.d_omega()[0], Series::tau(&c, 0).scale(&sd("-6/(1 + w)")).truncate(8));
    }

    #[test]
    fn homological_equation() {
        let c = ctx();
        let m = pq(&c, 3, 0).add(&pq(&c, 0, 3));
        let z = Series::zero(&c);
        assert!(homological_remainder(&m, &z).unwrap().is_zero());
        assert!(verify_homological(&pq(&c, 2, 2), &z).unwrap());
        let f = Series::moser_generator(&c, 0);
        let t = f.mul(&f).scale(&sd("-3/(1 + w)"));
        assert!(verify_homological(&m, &t).unwrap());
        let direct = homological_l(&m.sub(&homological_l(&m).unwrap().apply(&t))).unwrap();
        assert_eq!(j_a(&m, &t).unwrap(), direct);
        assert_eq!(j_a(&m, &f), Err(Error::NotInIdealSquare));
        assert!(verify_homological(&z, &t).unwrap());
    }
}
