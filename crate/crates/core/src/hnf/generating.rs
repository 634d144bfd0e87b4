use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{hnf_run, HnfState};
use crate::birkhoff::bnf_iterate;
use crate::error::{Error, Result};
use crate::scalars::{ExactScalar, LinearForm, SdElement};
use crate::series::{Monomial, RingContext, Series, SeriesJson};

/// `G_i = e^{−v_{k−1}} ⋯ e^{−v_0}(w_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunctions {
    pub g: Vec<Series>,
}

impl GeneratingFunctions {
    /// Applies the generators of a finished run to each `w_i`.
    pub fn from_state(state: &HnfState) -> Result<Self> {
        let ctx = state.ctx();
        let mut g: Vec<Series> = (0..ctx.dim()).map(|i| Series::omega(ctx, i)).collect();
        for v in &state.generators {
            g = g.iter().map(|x| v.exp_apply(x)).collect::<Result<_>>()?;
        }
        Ok(GeneratingFunctions { g })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    /// `∂G_i/∂w_j` at `w = 0, tau = 0`.
    pub fn jacobian_at_origin(&self) -> Result<Vec<Vec<ExactScalar>>> {
        let d = self.dim();
        let one = Monomial::one(d);
        let mut out = Vec::with_capacity(d);
        for gi in &self.g {
            let c = gi.coeff(&one).cloned().unwrap_or_else(|| SdElement::zero(d));
            let row = (0..d).map(|j| c.derivative(j).value_at_origin()).collect::<Result<Vec<_>>>()?;
            out.push(row);
        }
        Ok(out)
    }

    /// `G_i − w_i` vanishes at `tau = 0` and the Jacobian at the origin is the identity.
    pub fn check_invariants(&self) -> Result<bool> {
        let d = self.dim();
        let one = Monomial::one(d);
        for (i, gi) in self.g.iter().enumerate() {
            if gi.coeff(&one) != Some(&SdElement::omega(d, i)) {
                return Ok(false);
            }
            if !gi.is_in_r0() {
                return Ok(false);
            }
        }
        let jac = self.jacobian_at_origin()?;
        Ok(jac
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })))
    }

    pub fn to_json(&self) -> Vec<SeriesJson> {
        self.g.iter().map(Series::to_json).collect()
    }
}

/// Runs `steps` steps and returns the generating functions.
pub fn generating_functions(h: &crate::series::Series, steps: u32, trunc: u32) -> Result<GeneratingFunctions> {
    let states = hnf_run(h, steps, trunc)?;
    GeneratingFunctions::from_state(states.last().expect("nonempty"))
}

fn invert_matrix(m: &[Vec<ExactScalar>]) -> Result<Vec<Vec<ExactScalar>>> {
    let d = m.len();
    let mut a: Vec<Vec<ExactScalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(Error::JacobianSingular)?;
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        a[col] = a[col].iter().map(|x| x * &inv).collect();
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                a[r] = a[r].iter().zip(&pivot).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
    }
    Ok(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// Solves `G(w(tau), tau) = 0` with `w(0) = 0` by `w ← w − J0^{-1} G(w(tau), tau)`.
///
/// `eval` returns the residual `G(w(tau), tau)` for a candidate; each pass
/// fixes one more power of `tau`. The result is known below weighted degree `order`.
pub fn solve_fixed_point<F>(
    ctx: &Arc<RingContext>,
    jacobian: &[Vec<ExactScalar>],
    order: u32,
    mut eval: F,
) -> Result<Vec<Series>>
where
    F: FnMut(&[Series]) -> Result<Vec<Series>>,
{
    let d = jacobian.len();
    let jinv = invert_matrix(jacobian)?;
    let mut w: Vec<Series> = vec![Series::zero(ctx).truncate(order); d];
    for _ in 0..=order / 2 + 1 {
        let r = eval(&w)?;
        if let Some(bad) = r.iter().find(|x| x.trunc() < order) {
            return Err(Error::WindowUnderflow { needed: order, available: bad.trunc() });
        }
        let next: Vec<Series> = (0..d)
            .map(|i| {
                let mut s = w[i].clone();
                for (j, rj) in r.iter().enumerate() {
                    if !jinv[i][j].is_zero() {
                        s = s.sub(&rj.scale_scalar(&jinv[i][j]));
                    }
                }
                s.truncate(order)
            })
            .collect();
        if next == w {
            return Ok(w);
        }
        w = next;
    }
    Ok(w)
}

/// `w(tau)` with `G(w(tau), tau) = 0` below weighted degree `order`.
pub fn implicit_solve(g: &GeneratingFunctions, order: u32) -> Result<Vec<Series>> {
    let ctx = g.g.first().ok_or(Error::Invalid("no generating functions".into()))?.ctx().clone();
    let jac = g.jacobian_at_origin()?;
    solve_fixed_point(&ctx, &jac, order, |w| g.g.iter().map(|gi| pi_substitute(gi, w)).collect())
}

struct Substitution<'a> {
    ctx: Arc<RingContext>,
    omega: &'a [Series],
    powers: HashMap<(usize, u32), Series>,
    inverses: BTreeMap<LinearForm, Series>,
}

impl Substitution<'_> {
    fn power(&mut self, i: usize, k: u32) -> Series {
        if k == 0 {
            return Series::one(&self.ctx);
        }
        if let Some(s) = self.powers.get(&(i, k)) {
            return s.clone();
        }
        let s = self.power(i, k - 1).mul(&self.omega[i]);
        self.powers.insert((i, k), s.clone());
        s
    }

    fn inverse(&mut self, f: &LinearForm) -> Result<Series> {
        if let Some(s) = self.inverses.get(f) {
            return Ok(s.clone());
        }
        if f.constant().is_zero() {
            return Err(Error::PoleAtOrigin(f.j().to_vec()));
        }
        let d = self.ctx.dim();
        let mut s = Series::constant(&self.ctx, SdElement::constant(d, f.constant().clone()));
        for (i, &ji) in f.j().iter().enumerate() {
            if ji != 0 {
                s = s.add(&self.omega[i].scale_scalar(&ExactScalar::from_integer(ji)));
            }
        }
        let inv = s.reciprocal()?;
        self.inverses.insert(f.clone(), inv.clone());
        Ok(inv)
    }

    fn coefficient(&mut self, c: &SdElement) -> Result<Series> {
        let d = self.ctx.dim();
        let mut out = Series::zero(&self.ctx);
        for (exps, a) in c.numerator().terms() {
            let mut t = Series::constant(&self.ctx, SdElement::constant(d, a.clone()));
            for (i, &k) in exps.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&self.power(i, k));
                }
            }
            out = out.add(&t);
        }
        for (f, &k) in c.denominator() {
            let inv = self.inverse(f)?;
            for _ in 0..k {
                out = out.mul(&inv);
            }
        }
        Ok(out)
    }
}

/// `pi: x(w, tau, q, p) ↦ x(w(tau), tau, q, p)`, expanding each `1/(alpha + w, J)` by Newton division.
pub fn pi_substitute(x: &Series, omega_of_tau: &[Series]) -> Result<Series> {
    let ctx = x.ctx().clone();
    if omega_of_tau.len() != ctx.dim() {
        return Err(Error::DimensionMismatch { expected: ctx.dim(), got: omega_of_tau.len() });
    }
    let one = Monomial::one(ctx.dim());
    if omega_of_tau.iter().any(|w| w.coeff(&one).is_some()) {
        return Err(Error::Invalid("substituted series must vanish at tau = 0".into()));
    }
    if x.is_omega_free() {
        return Ok(x.clone());
    }
    let mut sub =
        Substitution { ctx: ctx.clone(), omega: omega_of_tau, powers: HashMap::new(), inverses: BTreeMap::new() };
    let mut out = Series::zero(&ctx).truncate(x.trunc());
    for (m, c) in x.iter() {
        let mono = Series::monomial(&ctx, m.clone(), SdElement::one(ctx.dim()));
        let coef = if c.is_constant() { Series::constant(&ctx, c.clone()) } else { sub.coefficient(c)? };
        out = out.add(&coef.mul(&mono));
    }
    Ok(out)
}

/// `pi(A_{H,steps})` written in `tau`, known below `2^steps + 2`.
pub fn recover_bnf(h: &Series, steps: u32, trunc: u32) -> Result<Series> {
    let states = hnf_run(h, steps, trunc)?;
    let last = states.last().expect("nonempty");
    let g = GeneratingFunctions::from_state(last)?;
    let order = g.g.iter().map(Series::trunc).min().unwrap_or(trunc);
    let w = implicit_solve(&g, order)?;
    pi_substitute(&last.normal_form(), &w)
}

/// Checks `recover_bnf` against the Birkhoff iteration through weighted degree `2^steps + 1`.
pub fn verify_consistency(h: &Series, steps: u32, trunc: u32) -> Result<Series> {
    let recovered = recover_bnf(h, steps, trunc)?;
    let through = super::required_trunc(steps).min(trunc);
    if recovered.trunc() < through {
        return Err(Error::WindowUnderflow { needed: through, available: recovered.trunc() });
    }
    let bnf = bnf_iterate(h, through)?.b;
    let bnf = bnf.rebase(recovered.ctx())?;
    let got = recovered.truncate(through);
    let expected = bnf.truncate(through);
    let keys: std::collections::BTreeSet<&Monomial> = got.terms().keys().chain(expected.terms().keys()).collect();
    let d = h.dim();
    for m in keys {
        let a = expected.coeff(m).cloned().unwrap_or_else(|| SdElement::zero(d));
        let b = got.coeff(m).cloned().unwrap_or_else(|| SdElement::zero(d));
        if a != b {
            return Err(Error::ConsistencyFailure {
                monomial: m.to_string(),
                expected: a.to_string(),
                got: b.to_string(),
            });
        }
    }
    Ok(got)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::anharmonic_oscillator;
    use crate::scalars::parse_sd;

    fn sd(s: &str) -> SdElement {
        parse_sd(s, 1, None).unwrap()
    }

    fn tau_poly(ctx: &Arc<RingContext>, c: &[i64]) -> Series {
        let t = Series::tau(ctx, 0);
        let mut out = Series::zero(ctx);
        for (k, &x) in c.iter().enumerate() {
            out = out.add(&t.pow(k as u32).scale_scalar(&ExactScalar::from_integer(x)));
        }
        out
    }

    #[test]
    fn second_generating_function() {
        let h = anharmonic_oscillator(6).unwrap();
        let g = generating_functions(&h, 2, 6).unwrap();
        let ctx = g.g[0].ctx().clone();
        let expect = Series::omega(&ctx, 0).add(&Series::tau(&ctx, 0).scale(&sd("6/(1 + w)"))).truncate(4);
        assert_eq!(g.g[0], expect);
        assert!(g.check_invariants().unwrap());
        let w = implicit_solve(&g, 4).unwrap();
        assert_eq!(w[0], tau_poly(&ctx, &[0, -6]).truncate(4));
        let g1 = generating_functions(&h, 1, 6).unwrap();
        assert_eq!(g1.g[0], Series::omega(&ctx, 0));
    }

    #[test]
    fn third_generating_function() {
        let h = anharmonic_oscillator(10).unwrap();
        let g = generating_functions(&h, 3, 10).unwrap();
        let ctx = g.g[0].ctx().clone();
        let w = implicit_solve(&g, 8).unwrap();
        assert_eq!(w[0], tau_poly(&ctx, &[0, -6, -36, -420]).truncate(8));
        let b = recover_bnf(&h, 3, 10).unwrap();
        assert_eq!(b, tau_poly(&ctx, &[0, 1, -3, -12, -105]).truncate(10));
        assert!(verify_consistency(&h, 3, 10).is_ok());
    }

    #[test]
    fn substitution_of_normal_form() {
        let h = anharmonic_oscillator(6).unwrap();
        let ctx = RingContext::new(h.ctx().alpha().clone(), 6).unwrap();
        let t = Series::tau(&ctx, 0);
        let a2 = t.scale(&sd("1 + w")).add(&t.pow(2).scale(&sd("3/(1 + w)")));
        let w2 = vec![tau_poly(&ctx, &[0, -6]).truncate(4)];
        assert_eq!(pi_substitute(&a2, &w2).unwrap(), tau_poly(&ctx, &[0, 1, -3]).truncate(6));
        assert_eq!(pi_substitute(&t, &w2).unwrap(), t);
    }
}
