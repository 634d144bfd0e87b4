//! The Hamiltonian normal form iteration with doubling windows.
//!
//! Starting from the `w`-extension `F0 = H + Σ w_i p_i q_i`, each step
//! conjugates by `e^{−v_n}` and moves the next window `[2^n+2, 2^{n+1}+2)`
//! of the transformed Hamiltonian into the normal form `A_n`.

mod closure;
mod generating;

use std::sync::Arc;

use serde::Serialize;

pub use closure::{closure_polynomial, ClosurePolynomial};
pub use generating::{
    generating_functions, implicit_solve, pi_substitute, recover_bnf, solve_fixed_point, verify_consistency,
    GeneratingFunctions,
};

use crate::birkhoff::check_quadratic;
use crate::error::{Error, Result};
use crate::moser::{a0, homological_l, j_a, project_moser, split_r0_i2};
use crate::poisson::Derivation;
use crate::series::{RingContext, Series, SeriesJson};

/// `F = H + Σ w_i p_i q_i`.
pub fn omega_extend(h: &Series) -> Result<Series> {
    check_quadratic(h)?;
    let ctx = h.ctx();
    let mut f = h.clone();
    for i in 0..ctx.dim() {
        f = f.add(&Series::p(ctx, i).mul(&Series::q(ctx, i)).mul(&Series::omega(ctx, i)));
    }
    Ok(f)
}

/// `2^n + 2`, the lower edge of window `n`.
pub fn window_start(n: u32) -> u32 {
    (1u32 << n) + 2
}

/// Truncation order a run of `steps` steps needs.
pub fn required_trunc(steps: u32) -> u32 {
    window_start(steps)
}

/// Per-step membership of the increment `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: u32,
    pub in_r0_plus_i2: bool,
    pub in_moser_algebra: bool,
}

/// `(F_n, A_n, v_n)` together with the increments so far.
#[derive(Clone, Debug)]
pub struct HnfState {
    pub n: u32,
    pub f: Series,
    pub a: Series,
    pub v: Derivation,
    pub increments: Vec<Series>,
    pub generators: Vec<Derivation>,
    pub reports: Vec<StepReport>,
}

#[derive(Serialize)]
struct StateJson {
    n: u32,
    a: SeriesJson,
    a_h: SeriesJson,
    f: SeriesJson,
    v: String,
    reports: Vec<StepReport>,
}

impl HnfState {
    /// State 0 for `F0 = omega_extend(H)` in a ring truncated at `trunc`.
    pub fn initial(h: &Series, trunc: u32) -> Result<HnfState> {
        if h.trunc() < trunc {
            return Err(Error::WindowUnderflow { needed: trunc, available: h.trunc() });
        }
        let ctx = h.ctx().with_trunc(trunc)?;
        let f = omega_extend(&h.rebase(&ctx)?)?;
        let a = a0(&ctx);
        let v = homological_l(&f.window(3, Some(4)))?.with_order(1)?;
        let state = HnfState { n: 0, f, a, v, increments: Vec::new(), generators: Vec::new(), reports: Vec::new() };
        state.check_invariants()?;
        Ok(state)
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        self.f.ctx()
    }

    /// `A_n mod I`: the normal form written in `tau`.
    pub fn normal_form(&self) -> Series {
        reduce_mod_i(&self.a)
    }

    /// `order(v_n) = 2^n` and `F_n − A_n = O(2^n + 2)`.
    pub fn check_invariants(&self) -> Result<()> {
        let order = 1i32 << self.n;
        if self.v.order() != order {
            return Err(Error::OrderViolation { declared: self.v.order(), actual: order });
        }
        let diff = self.f.sub(&self.a);
        let need = window_start(self.n);
        if diff.low_degree() < need.min(diff.trunc()) {
            return Err(Error::Invalid(format!(
                "F_{n} − A_{n} has a term of degree {} below {need}",
                diff.low_degree(),
                n = self.n
            )));
        }
        Ok(())
    }

    /// One step of the iteration; order, window gap and increment membership are rechecked.
    pub fn step(&self) -> Result<HnfState> {
        let ctx = self.ctx().clone();
        let n = self.n;
        let lo = window_start(n);
        let hi = window_start(n + 1);
        if hi > ctx.trunc() {
            return Err(Error::WindowUnderflow { needed: hi, available: ctx.trunc() });
        }
        let s = self.f.sub(&self.v.apply(&self.f)).window(lo, Some(hi));
        let split = split_r0_i2(&s);
        if !split.in_r0_plus_i2() {
            return Err(Error::MembershipViolation { step: n + 1 });
        }
        let report =
            StepReport { step: n + 1, in_r0_plus_i2: true, in_moser_algebra: project_moser(&s).in_moser_algebra() };
        let f = self.v.exp_apply(&self.f)?;
        let a = self.a.add(&s);
        let t = split_r0_i2(&a.sub(&a0(&ctx))).i2;
        let next_hi = window_start(n + 2).min(ctx.trunc());
        let m = f.window(hi, Some(next_hi.max(hi)));
        let v = j_a(&m, &t)?.with_order(1 << (n + 1))?;
        let mut increments = self.increments.clone();
        increments.push(s);
        let mut generators = self.generators.clone();
        generators.push(self.v.clone());
        let mut reports = self.reports.clone();
        reports.push(report);
        let next = HnfState { n: n + 1, f, a, v, increments, generators, reports };
        next.check_invariants()?;
        Ok(next)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let js = StateJson {
            n: self.n,
            a: self.a.to_json(),
            a_h: self.normal_form().to_json(),
            f: self.f.to_json(),
            v: self.v.to_string(),
            reports: self.reports.clone(),
        };
        serde_json::to_value(js).expect("serializable")
    }
}

/// `x mod I`, i.e. `p_i q_i ↦ tau_i` on the `f`-free part.
pub fn reduce_mod_i(x: &Series) -> Series {
    let form = crate::moser::iadic_decompose(x);
    let zero = vec![0; x.dim()];
    form.part(&zero).cloned().unwrap_or_else(|| Series::zero(x.ctx())).truncate(x.trunc())
}

/// Runs `steps` steps in a ring truncated at `trunc`, which must be at least `2^steps + 2`.
pub fn hnf_run(h: &Series, steps: u32, trunc: u32) -> Result<Vec<HnfState>> {
    let need = required_trunc(steps);
    if trunc < need {
        return Err(Error::WindowUnderflow { needed: need, available: trunc });
    }
    let mut states = vec![HnfState::initial(h, trunc)?];
    for _ in 0..steps {
        let next = states.last().expect("nonempty").step()?;
        states.push(next);
    }
    Ok(states)
}

/// `A_{H,steps}`.
pub fn hamiltonian_normal_form(h: &Series, steps: u32, trunc: u32) -> Result<Series> {
    let states = hnf_run(h, steps, trunc)?;
    Ok(states.last().expect("nonempty").normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::anharmonic_oscillator;
    use crate::scalars::parse_sd;

    fn sd(s: &str) -> crate::scalars::SdElement {
        parse_sd(s, 1, None).unwrap()
    }

    #[test]
    fn anharmonic_normal_forms() {
        let h = anharmonic_oscillator(10).unwrap();
        let states = hnf_run(&h, 3, 10).unwrap();
        let ctx = states[0].ctx().clone();
        let t = Series::tau(&ctx, 0);
        let a1 = t.scale(&sd("1 + w"));
        assert_eq!(states[1].normal_form(), a1);
        let a2 = a1.add(&t.pow(2).scale(&sd("3/(1 + w)")));
        assert_eq!(states[2].normal_form(), a2);
        let a3 = a2.add(&t.pow(3).scale(&sd("6/(1 + w)^3"))).add(&t.pow(4).scale(&sd("-9/(1 + w)^5")));
        assert_eq!(states[3].normal_form(), a3);
        assert!(states.iter().skip(1).all(|s| s.reports.iter().all(|r| r.in_r0_plus_i2)));
    }

    #[test]
    fn first_step_keeps_a0() {
        let h = anharmonic_oscillator(10).unwrap();
        let s0 = HnfState::initial(&h, 10).unwrap();
        let s1 = s0.step().unwrap();
        assert_eq!(s1.a, s0.a);
        assert!(s1.f.window(3, Some(4)).is_zero());
        let m = crate::series::Monomial::new(vec![4], vec![1], vec![0]);
        assert_eq!(s1.f.coeff(&m), Some(&sd("4/(1 + w)^2")));
    }

    #[test]
    fn diagonal_fixed_point() {
        let h = anharmonic_oscillator(10).unwrap();
        let ctx = h.ctx().clone();
        let pq = Series::p(&ctx, 0).mul(&Series::q(&ctx, 0));
        let states = hnf_run(&pq, 3, 10).unwrap();
        assert!(states.iter().all(|s| s.v.is_zero() && s.a == a0(s.ctx())));
        assert!(matches!(hnf_run(&pq, 4, 10), Err(Error::WindowUnderflow { needed: 18, available: 10 })));
    }
}
