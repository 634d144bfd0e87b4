use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::binomial;

use crate::scalars::{ExactScalar, SdElement};
use crate::series::{Monomial, RingContext, Series};

/// `x = Σ_c x_c · f^c` with every `x_c` free of the products `p_i q_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct IadicForm {
    ctx: Arc<RingContext>,
    trunc: u32,
    parts: BTreeMap<Vec<u32>, Series>,
}

impl IadicForm {
    pub fn parts(&self) -> &BTreeMap<Vec<u32>, Series> {
        &self.parts
    }

    pub fn part(&self, c: &[u32]) -> Option<&Series> {
        self.parts.get(c)
    }

    /// Truncation order of the decomposed series.
    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn reassemble(&self) -> Series {
        let mut out = Series::zero(&self.ctx).truncate(self.trunc);
        for (c, x) in &self.parts {
            out = out.add(&x.mul(&f_power(&self.ctx, c)));
        }
        out
    }
}

/// `Π f_i^{c_i}`.
pub fn f_power(ctx: &Arc<RingContext>, c: &[u32]) -> Series {
    let mut out = Series::one(ctx);
    for (i, &k) in c.iter().enumerate() {
        if k > 0 {
            out = out.mul(&Series::moser_generator(ctx, i).pow(k));
        }
    }
    out
}

/// Rewrites each `p^a q^b` as `p^{a−k} q^{b−k} (tau + f)^k` with `k = min(a, b)`.
pub fn iadic_decompose(x: &Series) -> IadicForm {
    let ctx = x.ctx().clone();
    let d = ctx.dim();
    let mut parts: BTreeMap<Vec<u32>, Vec<(Monomial, SdElement)>> = BTreeMap::new();
    for (m, coef) in x.iter() {
        let k: Vec<u32> = m.p().iter().zip(m.q()).map(|(a, b)| *a.min(b)).collect();
        let p: Vec<u32> = m.p().iter().zip(&k).map(|(a, k)| a - k).collect();
        let q: Vec<u32> = m.q().iter().zip(&k).map(|(b, k)| b - k).collect();
        // (tau + f)^k = Σ_j C(k, j) tau^{k−j} f^j, componentwise
        let mut js: Vec<Vec<u32>> = vec![vec![]];
        for &ki in &k {
            js = js.into_iter().flat_map(|j| (0..=ki).map(move |x| [j.clone(), vec![x]].concat())).collect();
        }
        for j in js {
            let mut c = coef.clone();
            let mut t = m.t().to_vec();
            for i in 0..d {
                let b = binomial(u64::from(k[i]), u64::from(j[i]));
                if b != 1 {
                    c = c.scale(&ExactScalar::from_integer(b as i64));
                }
                t[i] += k[i] - j[i];
            }
            parts.entry(j).or_default().push((Monomial::new(p.clone(), q.clone(), t), c));
        }
    }
    let trunc = x.trunc();
    let parts = parts
        .into_iter()
        .map(|(c, terms)| {
            let shift = 2 * c.iter().sum::<u32>();
            let s = Series::from_terms(&ctx, terms).truncate(trunc.saturating_sub(shift));
            (c, s)
        })
        .filter(|(_, s)| !s.is_zero())
        .collect();
    IadicForm { ctx, trunc, parts }
}

/// `x = center + moser_tail + residual` with `center ∈ R0` and
/// `moser_tail ∈ I^2 ∩ R0[[f]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoserProjection {
    pub center: Series,
    pub moser_tail: Series,
    pub residual: Series,
}

impl MoserProjection {
    /// Membership in the Moser algebra `R0 + I^2 ∩ R0[[f]]`.
    pub fn in_moser_algebra(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn project_moser(x: &Series) -> MoserProjection {
    let form = iadic_decompose(x);
    let ctx = x.ctx();
    let zero = vec![0; ctx.dim()];
    let center = form.part(&zero).map(|s| s.filter(|m, _| !m.has_qp())).unwrap_or_else(|| Series::zero(ctx));
    let center = center.truncate(x.trunc());
    let mut tail = Series::zero(ctx).truncate(x.trunc());
    for (c, s) in form.parts() {
        if c.iter().sum::<u32>() >= 2 {
            let central = s.filter(|m, _| !m.has_qp());
            tail = tail.add(&central.mul(&f_power(ctx, c)));
        }
    }
    let residual = x.sub(&center).sub(&tail);
    MoserProjection { center, moser_tail: tail, residual }
}

/// `x = r0 + i2 + rest` with `r0 ∈ R0` and `i2 ∈ I^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSplit {
    pub r0: Series,
    pub i2: Series,
    pub rest: Series,
}

impl IdealSplit {
    pub fn in_r0_plus_i2(&self) -> bool {
        self.rest.is_zero()
    }

    pub fn in_i2(&self) -> bool {
        self.rest.is_zero() && self.r0.is_zero()
    }
}

pub fn split_r0_i2(x: &Series) -> IdealSplit {
    let form = iadic_decompose(x);
    let ctx = x.ctx();
    let zero = vec![0; ctx.dim()];
    let r0 = form.part(&zero).map(|s| s.filter(|m, _| !m.has_qp())).unwrap_or_else(|| Series::zero(ctx));
    let r0 = r0.truncate(x.trunc());
    let mut i2 = Series::zero(ctx).truncate(x.trunc());
    for (c, s) in form.parts() {
        if c.iter().sum::<u32>() >= 2 {
            i2 = i2.add(&s.mul(&f_power(ctx, c)));
        }
    }
    let rest = x.sub(&r0).sub(&i2);
    IdealSplit { r0, i2, rest }
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

    #[test]
    fn square_of_pq() {
        let c = ctx();
        let form = iadic_decompose(&pq(&c, 2, 2));
        let t = Series::tau(&c, 0);
        assert_eq!(form.part(&[0]).unwrap().truncate(10), t.mul(&t));
        assert_eq!(form.part(&[1]).unwrap(), &t.scale(&SdElement::integer(1, 2)).truncate(8));
        assert_eq!(form.part(&[2]).unwrap(), &Series::one(&c).truncate(6));
        assert_eq!(form.reassemble(), pq(&c, 2, 2));
        let form = iadic_decompose(&pq(&c, 3, 0));
        assert_eq!(form.parts().len(), 1);
        let form = iadic_decompose(&pq(&c, 1, 1));
        assert_eq!(form.part(&[0]).unwrap(), &t);
    }

    #[test]
    fn moser_algebra_membership() {
        let c = ctx();
        let k = parse_sd("3/(1 + w)", 1, None).unwrap();
        let t = Series::tau(&c, 0);
        let f2 = Series::moser_generator(&c, 0).pow(2);
        let x = t.mul(&t).scale(&k).sub(&f2.scale(&k));
        let pr = project_moser(&x);
        assert_eq!(pr.center, t.mul(&t).scale(&k));
        assert_eq!(pr.moser_tail, f2.scale(&k).neg());
        assert!(pr.in_moser_algebra());
        assert!(!project_moser(&pq(&c, 3, 0)).in_moser_algebra());
        let central = t.add(&Series::omega(&c, 0).pow(2));
        assert_eq!(project_moser(&central).center, central);
    }

    #[test]
    fn ideal_split() {
        let c = ctx();
        let f = Series::moser_generator(&c, 0);
        let x = f.mul(&f).mul(&pq(&c, 1, 0)).add(&Series::tau(&c, 0));
        let s = split_r0_i2(&x);
        assert!(s.in_r0_plus_i2());
        assert!(!project_moser(&x).in_moser_algebra());
        assert!(!split_r0_i2(&f).in_r0_plus_i2());
        assert!(split_r0_i2(&f.mul(&f)).in_i2());
    }
}
