//! Command-line front end: counting, spectral zeta, remainder series,
//! divisor sums and sharpness reports over tau grids, emitted as CSV or
//! JSON for external plotting.

mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use weyl_lab::asymptotics::{
    classify, evaluate_sample_with_budget, fit_exponent, leading_coefficient, sharpness_suite,
    RemainderSeries, SharpnessExample, DEFAULT_TAIL_FRACTION,
};
use weyl_lab::counting::{
    count_tensor_bruteforce_with_budget, count_tensor_recursive_with_budget, DEFAULT_BRUTE_BUDGET,
    DEFAULT_RECURSION_BUDGET,
};
use weyl_lab::divisor::{
    anisotropic_bruteforce, anisotropic_count_with_budget, anisotropic_count_split,
    anisotropic_main_term, dirichlet_main_term, divisor_bruteforce_with_budget,
    divisor_summatory_with_budget, DEFAULT_HYPERBOLA_BUDGET,
    DivisorQuery,
};
use weyl_lab::error::{Error, Result};
use weyl_lab::numeric::rat_to_f64;
use weyl_lab::zeta::{spectral_zeta_with_budget, DEFAULT_ZETA_BUDGET};
use weyl_lab::{parse_operator_with, ParseOptions, Rat, S1ZeroMode, TensorOperator};

use grid::GridSpec;
use output::{count_value, f17, samples_csv, samples_json};

#[derive(Parser)]
#[command(name = "weyl-lab", version, about = "Eigenvalue counting, spectral zeta functions and Weyl remainder experiments for tensor products of model operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Tolerance for spectral zeta evaluations.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Work budget override (tuples, terms or eigenvalues, per operation).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Multiplicity convention for the circle's zero mode (n = 0).
    #[arg(long = "s1-zero-mode-mult", global = true, default_value_t = 2)]
    s1_zero_mode_mult: u32,

    /// Output format for series data.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write series output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Recursive,
    Bruteforce,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DivisorMethod {
    /// Hyperbola split for the classical problem, direct loop otherwise.
    Auto,
    Hyperbola,
    /// Direct loop over the variable with the larger exponent.
    Direct,
    /// Symmetric sublinear split at the crossing point.
    Split,
    Bruteforce,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact eigenvalue count N(tau) of a tensor operator.
    Count {
        /// Operator expression, e.g. "a1 (x) a2^2".
        expr: String,
        #[arg(long)]
        tau: f64,
        #[arg(long, value_enum, default_value_t = CountMethod::Recursive)]
        method: CountMethod,
    },
    /// Tail-certified spectral zeta value of a single-factor operator.
    Zeta {
        expr: String,
        #[arg(long)]
        s: f64,
    },
    /// Counting samples with leading term and normalized remainder over a grid.
    Remainder {
        expr: String,
        /// geometric:START:STOP:POINTS | linear:... | breakpoints:...
        #[arg(long)]
        grid: String,
    },
    /// Dirichlet divisor counts, classical or anisotropic.
    Divisor {
        #[arg(long)]
        tau: f64,
        /// Exponent on the first variable (integer, p/q or decimal).
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Exponent on the second variable.
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, value_enum, default_value_t = DivisorMethod::Auto)]
        method: DivisorMethod,
        /// Also print the asymptotic main term and the normalized remainder.
        #[arg(long)]
        with_main: bool,
    },
    /// Sharpness report for the model examples B, C or D.
    Sharpness {
        /// B, C or D.
        example: String,
        #[arg(long, default_value = "geometric:1e3:1e6:40")]
        grid: String,
        /// Fraction of the grid treated as the tail window.
        #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
        tail_fraction: f64,
    },
    /// Fit the remainder exponent by log-log regression over a grid.
    Fit {
        expr: String,
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0.5)]
        tail_fraction: f64,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("WEYL_LAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let obj = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
            eprintln!("{obj}");
            ExitCode::from(error_exit_code(&e))
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::UnknownOperator(_) => "unknown-operator",
        Error::NonPositiveExponent(_) => "non-positive-exponent",
        Error::NegativeShift(_) => "negative-shift",
        Error::InvalidTau(_) => "invalid-tau",
        Error::FactorBelowOne { .. } => "factor-below-one",
        Error::Divergence { .. } => "divergence",
        Error::NonpositiveEigenvalue => "nonpositive-eigenvalue",
        Error::ToleranceUnreachable { .. } => "tolerance-unreachable",
        Error::Pole => "pole",
        Error::OutOfRange(..) => "out-of-range",
        Error::SymmetricCase => "symmetric-case",
        Error::MixedCalculus => "mixed-calculus",
        Error::CountOverflow => "count-overflow",
        Error::BudgetExceeded(_) => "budget-exceeded",
        Error::InsufficientData { .. } => "insufficient-data",
        Error::InvalidInput(_) => "invalid-input",
    }
}

fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::UnknownOperator(_)
        | Error::NonPositiveExponent(_)
        | Error::NegativeShift(_)
        | Error::InvalidTau(_)
        | Error::InvalidInput(_) => 2,
        Error::BudgetExceeded(_) | Error::ToleranceUnreachable { .. } | Error::CountOverflow => 4,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<()> {
    let opts = ParseOptions { s1_zero_mode: S1ZeroMode::from_mult(cli.s1_zero_mode_mult)? };
    match &cli.cmd {
        Cmd::Count { expr, tau, method } => cmd_count(cli, &opts, expr, *tau, *method),
        Cmd::Zeta { expr, s } => cmd_zeta(cli, &opts, expr, *s),
        Cmd::Remainder { expr, grid } => cmd_remainder(cli, &opts, expr, grid),
        Cmd::Divisor { tau, alpha, beta, method, with_main } => {
            cmd_divisor(cli, *tau, alpha, beta, *method, *with_main)
        }
        Cmd::Sharpness { example, grid, tail_fraction } => {
            cmd_sharpness(cli, example, grid, *tail_fraction)
        }
        Cmd::Fit { expr, grid, tail_fraction } => cmd_fit(cli, &opts, expr, grid, *tail_fraction),
    }
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_count(cli: &Cli, opts: &ParseOptions, expr: &str, tau: f64, method: CountMethod) -> Result<()> {
    let op = parse_operator_with(expr, opts)?;
    let count = match method {
        CountMethod::Recursive => {
            count_tensor_recursive_with_budget(&op, tau, cli.budget.unwrap_or(DEFAULT_RECURSION_BUDGET))?
        }
        CountMethod::Bruteforce => {
            count_tensor_bruteforce_with_budget(&op, tau, cli.budget.unwrap_or(DEFAULT_BRUTE_BUDGET))?
        }
    };
    match cli.format {
        Format::Csv => emit(cli, &format!("{count}\n")),
        Format::Json => {
            let doc = json!({ "expression": expr, "tau": tau, "count": count_value(count) });
            emit(cli, &format!("{doc}\n"))
        }
    }
}

fn cmd_zeta(cli: &Cli, opts: &ParseOptions, expr: &str, s: f64) -> Result<()> {
    let op = parse_operator_with(expr, opts)?;
    if op.rank() != 1 {
        return Err(Error::InvalidInput("zeta takes a single-factor operator".into()));
    }
    let z = spectral_zeta_with_budget(&op.factors()[0], s, cli.tol, cli.budget.unwrap_or(DEFAULT_ZETA_BUDGET))?;
    match cli.format {
        Format::Csv => emit(cli, &format!("{} tail_bound={:.3e} terms={}\n", f17(z.value), z.tail_bound, z.terms_used)),
        Format::Json => {
            let doc = json!({
                "expression": expr,
                "s": s,
                "value": z.value,
                "tail_bound": z.tail_bound,
                "terms_used": z.terms_used,
            });
            emit(cli, &format!("{doc}\n"))
        }
    }
}

/// Classify once, then evaluate the grid rows in parallel (emitted in grid
/// order, so runs are byte-identical).
fn compute_series(op: &TensorOperator, taus: &[f64], tol: f64, budget: Option<u64>) -> Result<RemainderSeries<f64>> {
    let (dominance, mut law) = classify::<f64>(op)?;
    law.leading_coeff = Some(leading_coefficient(op, tol)?);
    let budget = budget.unwrap_or(DEFAULT_RECURSION_BUDGET);
    let samples = taus
        .par_iter()
        .map(|&t| evaluate_sample_with_budget(op, &law, t, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(RemainderSeries { dominance, law, samples })
}

fn series_meta(cli: &Cli, expr: &str, grid: &str, series: &RemainderSeries<f64>) -> serde_json::Value {
    json!({
        "expression": expr,
        "grid": grid,
        "case": series.law.case.to_string(),
        "leading_exponent": series.law.leading_exp.to_string(),
        "leading_coefficient": series.law.leading_coeff,
        "remainder_exponent": series.law.remainder_exp.to_string(),
        "remainder_log_power": series.law.remainder_log_power,
        "tolerance": cli.tol,
        "s1_zero_mode_mult": cli.s1_zero_mode_mult,
    })
}

fn cmd_remainder(cli: &Cli, opts: &ParseOptions, expr: &str, grid: &str) -> Result<()> {
    let op = parse_operator_with(expr, opts)?;
    let spec = GridSpec::parse(grid)?;
    let taus = spec.taus(&op, cli.budget.unwrap_or(DEFAULT_BRUTE_BUDGET))?;
    let series = compute_series(&op, &taus, cli.tol, cli.budget)?;
    let content = match cli.format {
        Format::Csv => samples_csv(&series.samples),
        Format::Json => samples_json(series_meta(cli, expr, grid, &series), &series.samples),
    };
    emit(cli, &content)
}

fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || Error::InvalidInput(format!("cannot parse rational `{text}`"));
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((i, f)) = text.split_once('.') {
        let i: i64 = if i.is_empty() { 0 } else { i.trim().parse().map_err(|_| bad())? };
        let den = 10i64.checked_pow(f.len() as u32).ok_or_else(bad)?;
        let fnum: i64 = f.parse().map_err(|_| bad())?;
        return Ok(Rat::from_integer(i) + Rat::new(fnum, den));
    }
    let n: i64 = text.trim().parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

fn cmd_divisor(cli: &Cli, tau: f64, alpha: &str, beta: &str, method: DivisorMethod, with_main: bool) -> Result<()> {
    let alpha = parse_rat(alpha)?;
    let beta = parse_rat(beta)?;
    let q = DivisorQuery::new(tau, alpha, beta)?;
    let classical = alpha == Rat::from_integer(1) && beta == Rat::from_integer(1);
    let budget = cli.budget.unwrap_or(DEFAULT_BRUTE_BUDGET);
    let count = match (method, classical) {
        (DivisorMethod::Auto | DivisorMethod::Hyperbola, true) => {
            divisor_summatory_with_budget(tau, cli.budget.unwrap_or(DEFAULT_HYPERBOLA_BUDGET))?
        }
        (DivisorMethod::Hyperbola, false) => {
            return Err(Error::InvalidInput("hyperbola method applies to alpha = beta = 1; use direct or split".into()))
        }
        (DivisorMethod::Auto | DivisorMethod::Direct, false) => anisotropic_count_with_budget(&q, budget)?,
        (DivisorMethod::Direct, true) => anisotropic_count_with_budget(&q, budget)?,
        (DivisorMethod::Split, _) => anisotropic_count_split(&q)?,
        (DivisorMethod::Bruteforce, true) => divisor_bruteforce_with_budget(tau, budget)?,
        (DivisorMethod::Bruteforce, false) => anisotropic_bruteforce(&q, budget)?,
    };
    let diagnostics = if with_main {
        let main: f64 = if classical { dirichlet_main_term(tau) } else { anisotropic_main_term(&q, tau)? };
        let remainder = count as f64 - main;
        let exponent = 1.0 / (rat_to_f64(alpha) + rat_to_f64(beta));
        Some((main, remainder, remainder / tau.powf(exponent)))
    } else {
        None
    };
    match cli.format {
        Format::Csv => {
            let mut text = format!("{count}\n");
            if let Some((main, remainder, normalized)) = diagnostics {
                text.push_str(&format!("main={}\nremainder={}\nnormalized={}\n", f17(main), f17(remainder), f17(normalized)));
            }
            emit(cli, &text)
        }
        Format::Json => {
            let mut doc = json!({
                "tau": tau,
                "alpha": alpha.to_string(),
                "beta": beta.to_string(),
                "count": count_value(count),
            });
            if let Some((main, remainder, normalized)) = diagnostics {
                doc["main"] = json!(main);
                doc["remainder"] = json!(remainder);
                doc["normalized"] = json!(normalized);
            }
            emit(cli, &format!("{doc}\n"))
        }
    }
}

fn cmd_sharpness(cli: &Cli, example: &str, grid: &str, tail_fraction: f64) -> Result<()> {
    let example = SharpnessExample::from_name(example)?;
    let spec = GridSpec::parse(grid)?;
    let op = example.operator();
    let taus = spec.taus(&op, cli.budget.unwrap_or(DEFAULT_BRUTE_BUDGET))?;
    let report = sharpness_suite(example, &taus, cli.tol, tail_fraction)?;
    match cli.format {
        Format::Csv => {
            let mut text = String::new();
            text.push_str(&format!("example {} over {} samples\n", example.name(), report.samples.len()));
            text.push_str(&format!(
                "case={} leading_exponent={} leading_coefficient={} remainder_exponent={} log_power={}\n",
                report.law.case,
                report.law.leading_exp,
                f17(report.law.leading_coeff.unwrap_or(f64::NAN)),
                report.law.remainder_exp,
                report.law.remainder_log_power,
            ));
            text.push_str(&format!(
                "normalized_remainder min={} max={} max_abs={}\n",
                f17(report.min_normalized),
                f17(report.max_normalized),
                f17(report.max_abs_normalized),
            ));
            text.push_str(&format!(
                "tail window tau>={}: max={}\n",
                f17(report.tail_start),
                f17(report.tail_max),
            ));
            text.push_str(&format!(
                "envelope ok={} points={} worst_lower_margin={:.3e} worst_upper_margin={:.3e}\n",
                report.envelope.ok,
                report.envelope.points_checked,
                report.envelope.worst_lower_margin,
                report.envelope.worst_upper_margin,
            ));
            emit(cli, &text)
        }
        Format::Json => {
            let doc = json!({
                "example": example.name(),
                "grid": grid,
                "case": report.law.case.to_string(),
                "leading_exponent": report.law.leading_exp.to_string(),
                "leading_coefficient": report.law.leading_coeff,
                "remainder_exponent": report.law.remainder_exp.to_string(),
                "remainder_log_power": report.law.remainder_log_power,
                "min_normalized": report.min_normalized,
                "max_normalized": report.max_normalized,
                "max_abs_normalized": report.max_abs_normalized,
                "tail_start": report.tail_start,
                "tail_max": report.tail_max,
                "envelope_ok": report.envelope.ok,
                "envelope_points": report.envelope.points_checked,
                "rows": report.samples.iter().map(output::sample_row).collect::<Vec<_>>(),
            });
            emit(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn cmd_fit(cli: &Cli, opts: &ParseOptions, expr: &str, grid: &str, tail_fraction: f64) -> Result<()> {
    let op = parse_operator_with(expr, opts)?;
    let spec = GridSpec::parse(grid)?;
    let taus = spec.taus(&op, cli.budget.unwrap_or(DEFAULT_BRUTE_BUDGET))?;
    let series = compute_series(&op, &taus, cli.tol, cli.budget)?;
    let (theta, confidence) = fit_exponent(&series.samples, tail_fraction)?;
    match cli.format {
        Format::Csv => emit(cli, &format!("theta={} confidence={}\n", f17(theta), f17(confidence))),
        Format::Json => {
            let mut meta = series_meta(cli, expr, grid, &series);
            meta["theta"] = json!(theta);
            meta["confidence"] = json!(confidence);
            meta["tail_fraction"] = json!(tail_fraction);
            emit(cli, &format!("{meta}\n"))
        }
    }
}
