//! The `hnf` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use super::demo::hnf_newton_demo;
use super::output::{closure_curve, curve_csv, to_json_string, write_atomic, Format};
use super::poincare::{birkhoff_truncation_table, format_poly, newton_continuation, poincare_birkhoff_series};
use super::problem::ProblemSpec;
use super::verify::run_suite;
use crate::birkhoff::bnf_iterate;
use crate::error::{Error, Result};
use crate::hnf::{
    closure_polynomial, hnf_run, implicit_solve, required_trunc, verify_consistency, GeneratingFunctions,
};
use crate::series::Series;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MATH: i32 = 2;

/// Seed used by `verify` when neither `HNF_SEED` nor `--seed` is given.
pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_STEPS: u32 = 3;
pub const DEFAULT_TAU0: f64 = 0.01;
pub const DEFAULT_X0: f64 = 0.5;
pub const DEFAULT_NEWTON_ORDER: u32 = 18;

#[derive(Debug, Parser)]
#[command(name = "hnf", version, about = "Birkhoff and Hamiltonian normal forms with exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem file (JSON); defaults to the anharmonic oscillator pq + p^3 + q^3.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Number of doubling steps.
    #[arg(long, global = true)]
    pub steps: Option<u32>,
    /// Truncation order N (terms of weighted degree below N are kept).
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Evaluation point of the rational truncations.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Value of tau for the Newton demo.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau0: Option<f64>,
    /// Directory receiving the output file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized trials; HNF_SEED takes precedence.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Trials per property suite in `verify`.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Birkhoff normal form.
    Bnf,
    /// Hamiltonian normal forms A_1..A_k with per-step invariants.
    Hnf,
    /// Generating functions, closure polynomials and closure curves.
    Gen,
    /// Implicit solve and consistency with the Birkhoff normal form.
    Solve,
    /// Rational truncations: series, Birkhoff values and Newton continuation.
    Poincare,
    /// Newton continuation along the closures of the generating functions.
    HnfDemo,
    /// The full invariant and reproduction suite.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Bnf => "bnf",
            Command::Hnf => "hnf",
            Command::Gen => "gen",
            Command::Solve => "solve",
            Command::Poincare => "poincare",
            Command::HnfDemo => "hnf-demo",
            Command::Verify => "verify",
        }
    }
}

/// What a subcommand produced, rendered according to `--format`.
pub struct Rendered {
    pub body: String,
    /// `Some` when the run finished but a mathematical check failed.
    pub failure: Option<String>,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered { body, failure: None }
    }
}

fn seed(cli: &Cli) -> Result<u64> {
    match std::env::var("HNF_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("HNF_SEED={s} is not an unsigned integer"))),
        Err(_) => Ok(cli.seed.unwrap_or(DEFAULT_SEED)),
    }
}

fn problem(cli: &Cli) -> Result<ProblemSpec> {
    match &cli.input {
        Some(path) => ProblemSpec::from_file(path),
        None => Ok(ProblemSpec::anharmonic()),
    }
}

fn steps(cli: &Cli, spec: &ProblemSpec) -> u32 {
    cli.steps.or(spec.steps).unwrap_or(DEFAULT_STEPS)
}

fn series_lines(x: &Series) -> String {
    x.iter().map(|(m, c)| format!("{m}: {c}\n")).collect()
}

fn series_csv(x: &Series) -> String {
    let d = x.dim();
    let mut s = String::new();
    let cols: Vec<String> = ["p", "q", "t"].iter().flat_map(|v| (1..=d).map(move |i| format!("{v}{i}"))).collect();
    s.push_str(&format!("{},coef\n", cols.join(",")));
    for (m, c) in x.iter() {
        let e: Vec<String> = m.p().iter().chain(m.q()).chain(m.t()).map(ToString::to_string).collect();
        s.push_str(&format!("{},\"{c}\"\n", e.join(",")));
    }
    s
}

fn run_bnf(cli: &Cli) -> Result<Rendered> {
    let spec = problem(cli)?;
    let n = cli.degree.or(spec.degree).unwrap_or(10);
    let r = bnf_iterate(&spec.hamiltonian(n)?, n)?;
    Ok(Rendered::ok(match cli.format {
        Format::Json => to_json_string(&r.to_json()),
        Format::Csv => series_csv(&r.b),
        Format::Text => format!("B = {}\n{}", r.b, series_lines(&r.b)),
    }))
}

fn run_hnf(cli: &Cli) -> Result<Rendered> {
    let spec = problem(cli)?;
    let k = steps(cli, &spec);
    let n = cli.degree.unwrap_or(required_trunc(k));
    let states = hnf_run(&spec.hamiltonian(n)?, k, n)?;
    let last = states.last().expect("nonempty");
    Ok(Rendered::ok(match cli.format {
        Format::Json => to_json_string(&states.iter().map(|s| s.to_json()).collect::<Vec<_>>()),
        Format::Csv => series_csv(&last.normal_form()),
        Format::Text => {
            let mut s = String::new();
            for st in &states[1..] {
                s.push_str(&format!("A_{} = {}\n", st.n, st.normal_form()));
            }
            for r in &last.reports {
                s.push_str(&format!(
                    "step {}: S in R0 + I^2: {}, S in Moser algebra: {}\n",
                    r.step, r.in_r0_plus_i2, r.in_moser_algebra
                ));
            }
            s
        }
    }))
}

fn run_gen(cli: &Cli) -> Result<Rendered> {
    let spec = problem(cli)?;
    let k = steps(cli, &spec);
    let n = cli.degree.unwrap_or(required_trunc(k));
    let states = hnf_run(&spec.hamiltonian(n)?, k, n)?;
    let g = GeneratingFunctions::from_state(states.last().expect("nonempty"))?;
    let omega = implicit_solve(&g, n.saturating_sub(2).max(1))?;
    let closure = if g.dim() == 1 { Some(closure_polynomial(&g.g[0])?) } else { None };
    Ok(Rendered::ok(match cli.format {
        Format::Json => to_json_string(&json!({
            "generating_functions": g.to_json(),
            "omega": omega.iter().map(Series::to_json).collect::<Vec<_>>(),
            "closure": closure.as_ref().map(|c| json!({"text": c.to_string(), "terms": c.to_json()})),
        })),
        Format::Csv => match &closure {
            Some(c) => curve_csv(&closure_curve(c, -0.05, 0.05, 101, 4.0)),
            None => return Err(Error::DimensionMismatch { expected: 1, got: g.dim() }),
        },
        Format::Text => {
            let mut s = String::new();
            for (i, gi) in g.g.iter().enumerate() {
                s.push_str(&format!("G_{} = {gi}\n", i + 1));
            }
            for (i, w) in omega.iter().enumerate() {
                s.push_str(&format!("w_{}(t) = {w}\n", i + 1));
            }
            if let Some(c) = &closure {
                s.push_str(&format!("closure: {c} = 0\n"));
            }
            s
        }
    }))
}

fn run_solve(cli: &Cli) -> Result<Rendered> {
    let spec = problem(cli)?;
    let k = steps(cli, &spec);
    let n = cli.degree.unwrap_or(required_trunc(k));
    let h = spec.hamiltonian(n)?;
    let through = required_trunc(k).min(n) - 1;
    let (line, recovered, failure) = match verify_consistency(&h, k, n) {
        Ok(b) => (format!("consistency: PASS through degree {through}"), Some(b), None),
        Err(e @ Error::ConsistencyFailure { .. }) => {
            let line = format!("consistency: FAIL ({e})");
            (line.clone(), None, Some(line))
        }
        Err(e) => return Err(e),
    };
    let body = match cli.format {
        Format::Json => to_json_string(&json!({
            "steps": k,
            "through_degree": through,
            "passed": failure.is_none(),
            "bnf": recovered.as_ref().map(Series::to_json),
        })),
        Format::Csv => recovered.as_ref().map(series_csv).unwrap_or_default(),
        Format::Text => match &recovered {
            Some(b) => format!("B = {b}\n{line}\n"),
            None => format!("{line}\n"),
        },
    };
    Ok(Rendered { body, failure })
}

fn run_poincare(cli: &Cli) -> Result<Rendered> {
    let x0 = cli.x0.unwrap_or(DEFAULT_X0);
    let n_max = cli.degree.unwrap_or(DEFAULT_NEWTON_ORDER);
    let b = poincare_birkhoff_series(9)?;
    let table = birkhoff_truncation_table(x0, 9.min(n_max))?;
    let trace = newton_continuation(x0, n_max as usize, x0)?;
    Ok(Rendered::ok(match cli.format {
        Format::Json => to_json_string(&json!({
            "x0": x0,
            "series": b.to_string(),
            "birkhoff_values": table,
            "newton": trace,
        })),
        Format::Csv => {
            let mut s = String::from("n,birkhoff,newton\n");
            for e in &trace.entries {
                let bv = table.get(e.n - 1).map(|v| v.to_string()).unwrap_or_default();
                s.push_str(&format!("{},{bv},{}\n", e.n, e.root));
            }
            s
        }
        Format::Text => {
            let mut s = format!("b(x) = {b}\n\nn  b_n({x0})\n");
            for (n, v) in table.iter().enumerate() {
                s.push_str(&format!("{:<2} {v:.6}\n", n + 1));
            }
            s.push_str(&format!("\nn  Newton root of the cleared f_n({x0}, y)\n"));
            for e in &trace.entries {
                s.push_str(&format!("{:<2} {:.6}\n", e.n, e.root));
            }
            s.push_str("\ncleared numerators\n");
            for e in trace.entries.iter().take(5) {
                let c: Option<Vec<BigInt>> = e.polynomial.iter().map(|x| x.parse().ok()).collect();
                if let Some(c) = c {
                    s.push_str(&format!("f_{}: {}\n", e.n, format_poly(&c, "y")));
                }
            }
            s
        }
    }))
}

fn run_demo(cli: &Cli) -> Result<Rendered> {
    let spec = problem(cli)?;
    let k = steps(cli, &spec);
    let tau0 = cli.tau0.unwrap_or(DEFAULT_TAU0);
    let h = spec.hamiltonian(required_trunc(k))?;
    let demo = hnf_newton_demo(&h, tau0, k)?;
    Ok(Rendered::ok(match cli.format {
        Format::Json => to_json_string(&demo),
        Format::Csv => {
            let mut s = String::from("k,omega,energy\n");
            for (e, a) in demo.trace.entries.iter().zip(&demo.energies) {
                s.push_str(&format!("{},{},{a}\n", e.n, e.root));
            }
            s
        }
        Format::Text => {
            let mut s = format!("tau0 = {tau0}\n");
            for ((e, a), c) in demo.trace.entries.iter().zip(&demo.energies).zip(&demo.closures) {
                s.push_str(&format!(
                    "k = {}: w = {:.12}, A = {a:.12} ({} iterations), closure {c}\n",
                    e.n, e.root, e.iterations
                ));
            }
            s
        }
    }))
}

fn run_verify(cli: &Cli) -> Result<Rendered> {
    let report = run_suite(seed(cli)?, cli.trials);
    let failure = (!report.all_passed()).then(|| "verification failed".to_string());
    let body = match cli.format {
        Format::Json => to_json_string(&report),
        Format::Csv => {
            let mut s = String::from("criterion,name,passed\n");
            for c in &report.checks {
                s.push_str(&format!("{},\"{}\",{}\n", c.criterion, c.name, c.passed));
            }
            s
        }
        Format::Text => format!("seed {}\n{report}", report.seed),
    };
    Ok(Rendered { body, failure })
}

pub fn run(cli: &Cli) -> Result<Rendered> {
    match cli.command {
        Command::Bnf => run_bnf(cli),
        Command::Hnf => run_hnf(cli),
        Command::Gen => run_gen(cli),
        Command::Solve => run_solve(cli),
        Command::Poincare => run_poincare(cli),
        Command::HnfDemo => run_demo(cli),
        Command::Verify => run_verify(cli),
    }
}

/// Parses `argv`, runs the subcommand and returns the exit code.
pub fn cli_main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_input_error() { EXIT_USAGE } else { EXIT_MATH };
        }
    };
    match &cli.out {
        Some(dir) => {
            let name = format!("{}.{}", cli.command.name(), cli.format.extension());
            match write_atomic(dir, &name, &rendered.body) {
                Ok(path) => {
                    let _ = writeln!(out, "wrote {}", path.display());
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            }
        }
        None => {
            let _ = write!(out, "{}", rendered.body);
        }
    }
    match rendered.failure {
        Some(msg) => {
            let _ = writeln!(err, "{msg}");
            EXIT_MATH
        }
        None => EXIT_OK,
    }
}

pub fn cli_main() -> i32 {
    cli_main_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
