use serde::{Deserialize, Serialize};

use super::newton::{newton_root, relative_residual, NewtonEntry, NewtonTrace};
use crate::error::{Error, Result};
use crate::hnf::{closure_polynomial, hnf_run, required_trunc, GeneratingFunctions};
use crate::series::Series;

/// Newton continuation of `w(tau0)` along the closures of `G_k = 0`, `k = 2..steps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HnfNewtonDemo {
    pub tau0: f64,
    pub trace: NewtonTrace,
    /// Closure polynomial of each `G_k`.
    pub closures: Vec<String>,
    /// `A_{H,k}(w_k, tau0)`.
    pub energies: Vec<f64>,
}

/// Evaluates a `d = 1` series in `w`, `tau` only.
pub fn eval_central(x: &Series, omega: f64, tau: f64) -> Result<f64> {
    let mut s = 0.0;
    for (m, c) in x.iter() {
        if m.has_qp() {
            return Err(Error::Invalid("series depends on q, p".into()));
        }
        s += c.eval_f64(&[omega])? * tau.powi(m.t()[0] as i32);
    }
    Ok(s)
}

pub fn hnf_newton_demo(h: &Series, tau0: f64, steps: u32) -> Result<HnfNewtonDemo> {
    if h.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: h.dim() });
    }
    if steps < 2 {
        return Err(Error::Invalid("the demo needs at least two steps".into()));
    }
    let mut demo = HnfNewtonDemo { tau0, trace: NewtonTrace::default(), closures: Vec::new(), energies: Vec::new() };
    let mut start = 0.0;
    for k in 2..=steps as usize {
        let states = hnf_run(h, k as u32, required_trunc(k as u32))?;
        let g = GeneratingFunctions::from_state(&states[k])?;
        let closure = closure_polynomial(&g.g[0])?;
        let c = closure.at_tau(tau0);
        let (root, iterations) = newton_root(&c, start, k)?;
        let a = states[k].normal_form();
        demo.energies.push(eval_central(&a, root, tau0)?);
        demo.closures.push(closure.to_string());
        demo.trace.entries.push(NewtonEntry {
            n: k,
            polynomial: c.iter().map(|x| format!("{x:e}")).collect(),
            warm_start: start,
            iterations,
            root,
            residual: relative_residual(&c, root),
        });
        start = root;
    }
    Ok(demo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::anharmonic_oscillator;

    #[test]
    fn parabola_root() {
        let h = anharmonic_oscillator(10).unwrap();
        let tau0 = 0.01;
        let demo = hnf_newton_demo(&h, tau0, 3).unwrap();
        let r2 = demo.trace.entries[0].root;
        let exact = (-1.0 + (1.0 - 24.0 * tau0).sqrt()) / 2.0;
        assert!((r2 - exact).abs() < 1e-14);
        let zero = hnf_newton_demo(&h, 0.0, 3).unwrap();
        assert!(zero.trace.roots().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn third_root_is_fourth_order_close() {
        let h = anharmonic_oscillator(10).unwrap();
        let gap = |t: f64| {
            let r = hnf_newton_demo(&h, t, 3).unwrap().trace.entries[1].root;
            (r - (-6.0 * t - 36.0 * t * t - 420.0 * t.powi(3))).abs()
        };
        let (g1, g2) = (gap(0.01), gap(0.005));
        assert!(g1 <= 1e4 * 0.01f64.powi(4));
        let ratio = g1 / g2;
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }
}
