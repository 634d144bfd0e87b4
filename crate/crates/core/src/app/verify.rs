//! The invariant and reproduction suite behind `hnf verify`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poincare::{birkhoff_truncation_table, newton_continuation, poincare_birkhoff_series};
use crate::birkhoff::{
    anharmonic_oscillator, bnf_iterate, bnf_iterate_with, tau_power_series, verify_hypergeometric_inverse, Schedule,
};
use crate::error::{Error, Result};
use crate::hnf::{closure_polynomial, generating_functions, hnf_run, implicit_solve, verify_consistency, StepReport};
use crate::moser::{iadic_decompose, verify_homological};
use crate::poisson::{bracket, is_poisson_automorphism_sample, Derivation};
use crate::sampling::SeriesSampler;
use crate::scalars::{parse_scalar, parse_sd, ExactScalar, FrequencyVector};
use crate::series::{PowerSeries, RingContext, Series};

/// Reference normal form coefficients of `pq + p^3 + q^3`, `tau^1..tau^8`.
pub const ANHARMONIC_BNF: [i64; 8] = [1, -3, -12, -105, -1206, -16002, -232416, -3592377];

/// `b(x)` for the rational truncations, `x^1..x^9`.
pub const POINCARE_SERIES: [i64; 9] = [1, 0, 0, 1, -2, 2, 6, -35, 86];

/// Reference Birkhoff values at `x = 1/2`, to the digits shown.
pub const POINCARE_TABLE: [&str; 8] = ["0.5", "0.5", "0.5", "0.5625", "0.5", "0.53125", "0.57812", "0.441406"];

/// Reference Newton continuation values at `x = 1/2`.
pub const NEWTON_VALUES: [f64; 4] = [0.36602, 0.46926, 0.50593, 0.52043];
pub const NEWTON_LIMIT: f64 = 0.53124;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{mark}] {:>2} {}: {}", c.criterion, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(criterion: u32, name: &str, outcome: Result<(bool, String)>) -> Check {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { criterion, name: name.to_string(), passed, detail }
}

/// `a == b` below the smaller of the two truncation orders.
pub fn eq_mod(a: &Series, b: &Series) -> bool {
    let n = a.trunc().min(b.trunc());
    a.truncate(n) == b.truncate(n)
}

fn sd(s: &str) -> Result<crate::scalars::SdElement> {
    parse_sd(s, 1, None)
}

fn tau_poly(ctx: &Arc<RingContext>, c: &[i64]) -> Series {
    let t = Series::tau(ctx, 0);
    c.iter()
        .enumerate()
        .fold(Series::zero(ctx), |acc, (k, &x)| acc.add(&t.pow(k as u32).scale_scalar(&ExactScalar::from_integer(x))))
}

/// `pq + (random cubic and quartic terms)` with `alpha = 1`.
pub fn random_d1_hamiltonian<R: Rng + ?Sized>(trunc: u32, rng: &mut R) -> Result<Series> {
    let ctx = RingContext::new(FrequencyVector::from_integers(&[1])?, trunc)?;
    let quad = Series::p(&ctx, 0).mul(&Series::q(&ctx, 0));
    let mut pert = Series::zero(&ctx);
    while pert.is_zero() || pert.window(3, Some(4)).is_zero() {
        pert = SeriesSampler::phase_space(3, 4, 5).sample(&ctx, rng);
    }
    Ok(quad.add(&pert))
}

/// `p1 q1 + √2 p2 q2 + (random cubic terms)`.
pub fn random_d2_hamiltonian<R: Rng + ?Sized>(trunc: u32, rng: &mut R) -> Result<Series> {
    let alpha = FrequencyVector::new(vec![ExactScalar::one(), parse_scalar("√2")?])?;
    let ctx = RingContext::new(alpha.clone(), trunc)?;
    let mut h = Series::zero(&ctx);
    for (i, a) in alpha.components().iter().enumerate() {
        h = h.add(&Series::p(&ctx, i).mul(&Series::q(&ctx, i)).scale_scalar(a));
    }
    let mut pert = Series::zero(&ctx);
    while pert.is_zero() {
        pert = SeriesSampler::phase_space(3, 3, 4).sample(&ctx, rng);
    }
    Ok(h.add(&pert))
}

/// A derivation of order at least 1 with Hamiltonian, `∂w` and `∂tau` parts.
pub fn random_derivation<R: Rng + ?Sized>(ctx: &Arc<RingContext>, rng: &mut R) -> Result<Derivation> {
    let d = ctx.dim();
    let ham = SeriesSampler { min_degree: 3, max_degree: 5, terms: 3, ..Default::default() }.sample(ctx, rng);
    let d_omega = (0..d).map(|_| SeriesSampler::central(2, 4, 2).sample(ctx, rng)).collect();
    let d_tau = (0..d).map(|_| SeriesSampler::central(4, 6, 2).sample(ctx, rng)).collect();
    Derivation::new(ham, d_omega, d_tau, 1)
}

fn unit_ctx(trunc: u32) -> Result<Arc<RingContext>> {
    RingContext::new(FrequencyVector::from_integers(&[1])?, trunc)
}

fn criterion_1() -> Result<(bool, String)> {
    let b = tau_power_series(&bnf_iterate(&anharmonic_oscillator(18)?, 18)?.b, 8)?;
    let got: Vec<String> = b.coeffs()[1..].iter().map(ToString::to_string).collect();
    let want: Vec<String> = ANHARMONIC_BNF.iter().map(ToString::to_string).collect();
    Ok((got == want, format!("B = {b}")))
}

fn criterion_2() -> Result<(bool, String)> {
    let b = bnf_iterate(&anharmonic_oscillator(18)?, 18)?.b;
    let ok = verify_hypergeometric_inverse(&b, 8)?;
    let inv = tau_power_series(&b, 8)?.reverse()?;
    Ok((ok, format!("B^-1 = {inv}")))
}

fn criterion_3() -> Result<(bool, String)> {
    let states = hnf_run(&anharmonic_oscillator(10)?, 3, 10)?;
    let ctx = states[0].ctx().clone();
    let t = Series::tau(&ctx, 0);
    let a1 = t.scale(&sd("1 + w")?);
    let a2 = a1.add(&t.pow(2).scale(&sd("3/(1 + w)")?));
    let a3 = a2.add(&t.pow(3).scale(&sd("6/(1 + w)^3")?)).add(&t.pow(4).scale(&sd("-9/(1 + w)^5")?));
    let ok = [a1, a2, a3].iter().zip(&states[1..]).all(|(a, s)| &s.normal_form() == a);
    Ok((ok, format!("A_3 = {}", states[3].normal_form())))
}

fn criterion_4() -> Result<(bool, String)> {
    let h6 = anharmonic_oscillator(6)?;
    let g2 = generating_functions(&h6, 2, 6)?;
    let ctx = g2.g[0].ctx().clone();
    let expect = Series::omega(&ctx, 0).add(&Series::tau(&ctx, 0).scale(&sd("6/(1 + w)")?)).truncate(4);
    let w2 = implicit_solve(&g2, 4)?;
    let closure = closure_polynomial(&g2.g[0])?.to_string();
    let h10 = anharmonic_oscillator(10)?;
    let g3 = generating_functions(&h10, 3, 10)?;
    let w3 = implicit_solve(&g3, 8)?;
    let ctx10 = w3[0].ctx().clone();
    let ok = g2.g[0] == expect
        && w2[0] == tau_poly(&ctx, &[0, -6]).truncate(4)
        && w3[0] == tau_poly(&ctx10, &[0, -6, -36, -420]).truncate(8)
        && closure == "w^2 + w + 6*t";
    Ok((ok, format!("G = {}; w_3 = {}; closure {closure}", g2.g[0], w3[0])))
}

/// The runs of criterion 5, also audited by criterion 6.
fn consistency_runs(rng: &mut ChaCha8Rng) -> Result<Vec<(String, Series, u32, u32)>> {
    let mut runs = vec![("anharmonic".to_string(), anharmonic_oscillator(10)?, 3, 10)];
    for k in 0..5 {
        runs.push((format!("random d=1 #{k}"), random_d1_hamiltonian(10, rng)?, 3, 10));
    }
    runs.push(("random d=2".to_string(), random_d2_hamiltonian(6, rng)?, 2, 6));
    Ok(runs)
}

fn criterion_5(runs: &[(String, Series, u32, u32)]) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    for (name, h, steps, trunc) in runs {
        verify_consistency(h, *steps, *trunc)?;
        notes.push(format!("{name} through degree {}", trunc - 1));
    }
    Ok((true, notes.join(", ")))
}

fn criterion_6(runs: &[(String, Series, u32, u32)]) -> Result<(bool, String)> {
    let mut reports: Vec<StepReport> = Vec::new();
    for (_, h, steps, trunc) in runs {
        let states = hnf_run(h, *steps, *trunc)?;
        for s in &states {
            s.check_invariants()?;
        }
        reports.extend(states.last().expect("nonempty").reports.iter().cloned());
    }
    let ok = reports.iter().all(|r| r.in_r0_plus_i2);
    let m = reports.iter().filter(|r| r.in_moser_algebra).count();
    Ok((ok, format!("{} steps in R0 + I^2; {m}/{} increments in the Moser algebra", reports.len(), reports.len())))
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let ctx = unit_ctx(10)?;
    let ms = SeriesSampler { min_degree: 3, max_degree: 8, terms: 3, ..Default::default() };
    let ts = SeriesSampler { min_degree: 4, max_degree: 8, terms: 2, ..Default::default() };
    let mut passed = 0;
    for _ in 0..50 {
        let m = ms.sample(&ctx, rng);
        let t = ts.sample_ideal_square(&ctx, rng);
        if verify_homological(&m, &t)? {
            passed += 1;
        }
    }
    Ok((passed == 50, format!("{passed}/50 pairs")))
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let h = anharmonic_oscillator(10)?;
    let ctx = h.ctx().clone();
    let ts = SeriesSampler {
        min_degree: 4,
        max_degree: 8,
        terms: 2,
        with_omega: false,
        with_denominators: false,
        ..Default::default()
    };
    let gs = SeriesSampler::phase_space(1, 6, 4);
    let mut passed = 0;
    for _ in 0..20 {
        let t = ts.sample_ideal_square(&ctx, rng);
        let g = gs.sample(&ctx, rng);
        let a = bracket(&g, &h).substitute_tau_by_pq()?;
        let b = bracket(&g, &h.add(&t)).substitute_tau_by_pq()?;
        if eq_mod(&a, &b) {
            passed += 1;
        }
    }
    Ok((passed == 20, format!("{passed}/20 perturbations")))
}

fn criterion_9() -> Result<(bool, String)> {
    let b = poincare_birkhoff_series(9)?;
    let series_ok = b == {
        let mut c = vec![0];
        c.extend(POINCARE_SERIES);
        PowerSeries::from_integers(&c)
    };
    let table = birkhoff_truncation_table(0.5, 8)?;
    let table_ok = table.iter().zip(POINCARE_TABLE).all(|(v, s)| {
        let digits = s.split('.').nth(1).map_or(0, str::len);
        (v - s.parse::<f64>().expect("literal")).abs() <= 0.5 * 10f64.powi(-(digits as i32)) + 1e-12
    });
    let roots = newton_continuation(0.5, 18, 0.5)?.roots();
    let newton_ok = roots.iter().zip(NEWTON_VALUES).all(|(r, v)| (r - v).abs() <= 1e-5);
    let stable = roots[13..].iter().all(|r| (r - NEWTON_LIMIT).abs() <= 1e-5);
    let ok = series_ok && table_ok && newton_ok && stable;
    Ok((ok, format!("b = {b}; y_18 = {:.6}", roots[17])))
}

fn property(trials: usize, mut f: impl FnMut() -> Result<bool>) -> Result<(bool, String)> {
    let mut passed = 0;
    for _ in 0..trials {
        if f()? {
            passed += 1;
        }
    }
    Ok((passed == trials, format!("{passed}/{trials} trials")))
}

fn criterion_10(rng: &mut ChaCha8Rng, trials: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let ctx = match unit_ctx(8) {
        Ok(c) => c,
        Err(e) => return vec![check(10, "property suites", Err(e))],
    };
    let s = SeriesSampler { min_degree: 1, max_degree: 4, terms: 3, ..Default::default() };
    out.push(check(
        10,
        "bracket axioms",
        property(trials, || {
            let (f, g, h) = (s.sample(&ctx, rng), s.sample(&ctx, rng), s.sample(&ctx, rng));
            let anti = bracket(&f, &g) == bracket(&g, &f).neg();
            let leibniz = eq_mod(&bracket(&f, &g.mul(&h)), &bracket(&f, &g).mul(&h).add(&g.mul(&bracket(&f, &h))));
            let jacobi =
                bracket(&f, &bracket(&g, &h)).add(&bracket(&g, &bracket(&h, &f))).add(&bracket(&h, &bracket(&f, &g)));
            Ok(anti && leibniz && jacobi.is_zero())
        }),
    ));
    out.push(check(
        10,
        "exp ring morphism",
        property(trials, || {
            let v = random_derivation(&ctx, rng)?;
            let (f, g) = (s.sample(&ctx, rng), s.sample(&ctx, rng));
            Ok(eq_mod(&v.exp_apply(&f.mul(&g))?, &v.exp_apply(&f)?.mul(&v.exp_apply(&g)?)))
        }),
    ));
    out.push(check(
        10,
        "Poisson automorphism",
        property(trials, || {
            let v = random_derivation(&ctx, rng)?;
            is_poisson_automorphism_sample(&v, 1, rng)
        }),
    ));
    out.push(check(
        10,
        "I-adic round trip",
        property(trials, || {
            let x = SeriesSampler { min_degree: 0, max_degree: 7, terms: 5, ..Default::default() }.sample(&ctx, rng);
            Ok(iadic_decompose(&x).reassemble() == x)
        }),
    ));
    out.push(check(
        10,
        "window calculus",
        property(trials, || {
            let x = SeriesSampler { min_degree: 0, max_degree: 7, terms: 6, ..Default::default() }.sample(&ctx, rng);
            let i = rng.gen_range(0..4);
            let j = rng.gen_range(i..6);
            let k = rng.gen_range(j..8);
            let split = x.window(i, Some(j)).add(&x.window(j, Some(k)));
            let whole = x.window(0, Some(i)).add(&x.window(i, None));
            Ok(eq_mod(&split, &x.window(i, Some(k))) && whole == x)
        }),
    ));
    out.push(check(
        10,
        "schedule independence",
        property(trials, || {
            let h = random_d1_hamiltonian(8, rng)?;
            let a = bnf_iterate_with(&h, 8, Schedule::Batch)?.b;
            let b = bnf_iterate_with(&h, 8, Schedule::SingleMonomial)?.b;
            Ok(a == b)
        }),
    ));
    out
}

/// Runs every check with randomized parts drawn from `seed`.
pub fn run_suite(seed: u64, trials: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = vec![
        check(1, "normal form of the anharmonic oscillator", criterion_1()),
        check(2, "hypergeometric inverse", criterion_2()),
        check(3, "Hamiltonian normal forms A_1..A_3", criterion_3()),
        check(4, "generating function and implicit solve", criterion_4()),
    ];
    match consistency_runs(&mut rng) {
        Ok(runs) => {
            checks.push(check(5, "consistency with the Birkhoff normal form", criterion_5(&runs)));
            checks.push(check(6, "step invariants", criterion_6(&runs)));
        }
        Err(e) => {
            checks.push(check(5, "consistency with the Birkhoff normal form", Err(e.clone())));
            checks.push(check(6, "step invariants", Err(e)));
        }
    }
    checks.push(check(7, "homological equation", criterion_7(&mut rng)));
    checks.push(check(8, "invariance under I^2 perturbations", criterion_8(&mut rng)));
    checks.push(check(9, "rational truncation experiment", criterion_9()));
    checks.extend(criterion_10(&mut rng, trials));
    VerifyReport { seed, trials, checks }
}

/// Fails with the first failing check.
pub fn require(report: &VerifyReport) -> Result<()> {
    match report.checks.iter().find(|c| !c.passed) {
        None => Ok(()),
        Some(c) => Err(Error::Invalid(format!("criterion {} ({}) failed: {}", c.criterion, c.name, c.detail))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run_suite(11, 5);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.checks.len(), 15);
    }
}
