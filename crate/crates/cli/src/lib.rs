//! The `colorpoincare` command line: verification suites, tables,
//! expression evaluation and the convention search.
//!
//! Exit codes: 0 when every report passed, 1 when any failed, 2 on a usage
//! error (bad arguments, unparsable expressions, unsupported settings).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use colorpoincare_core::clifford::{CliffordData, Convention, ConventionSpace};
use colorpoincare_core::representation::{parse_degree_token, BlockLayout};
use colorpoincare_core::superalgebra::{build, convention_search, CouplingConfig, Formulation};
use colorpoincare_core::superspace::{DerivativeRule, QPlacement};
use colorpoincare_core::{parse_expr, run_suite, GradingConfig, Report, Suite, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads of parallel suites.
pub const THREADS_VAR: &str = "COLORPOINCARE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "colorpoincare", version, about = "Exact checks for the color Poincaré superalgebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Grading group Z_n^3; 0 selects Z^3 with formal q.
    #[arg(long, global = true, default_value_t = 0)]
    n: u32,
    #[arg(long, global = true, value_enum, default_value_t = FormulationArg::Four)]
    formulation: FormulationArg,
    /// Coupling override `d=VAL`, e.g. `r=8` or `1=1/2`; repeatable.
    #[arg(long = "kappa", global = true, value_name = "d=VAL")]
    kappa: Vec<String>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long = "report", global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Corrupt the ε and Grassmann suite inputs (exercises the failure path).
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one verification suite, or all of them.
    Verify {
        #[arg(value_enum)]
        target: Target,
    },
    /// Print a table.
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Normal-order an expression, or take its adjoint.
    Eval {
        expr: String,
        #[arg(long, conflicts_with = "adjoint")]
        normal_form: bool,
        #[arg(long)]
        adjoint: bool,
    },
    /// Convention search.
    Conventions {
        #[command(subcommand)]
        action: ConventionAction,
    },
}

#[derive(Subcommand, Debug)]
enum ConventionAction {
    /// Scan the default convention space and report the first passing point.
    Search {
        /// Write the convention record as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Epsilon,
    Grassmann,
    Algebra,
    Representation,
    Supergroup,
    Superspace,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableKind {
    Epsilon,
    Brackets,
    Blocks,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormulationArg {
    Two,
    Four,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Runs the command line and returns the exit code, printing to the
/// process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As `run`, with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    if let Err(UsageError(msg)) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    let mut buffer = Vec::new();
    let code = match dispatch(&cli, &mut buffer) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.options.out {
        Some(path) => std::fs::write(path, &buffer).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(&buffer).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    code
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(value) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| UsageError(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn suite_config(o: &Options) -> Result<SuiteConfig, UsageError> {
    let mut cfg = SuiteConfig::new(o.n)?;
    cfg.formulation = match o.formulation {
        FormulationArg::Two => Formulation::Two,
        FormulationArg::Four => Formulation::Four,
    };
    cfg.seed = o.seed;
    cfg.samples = o.samples;
    cfg.inject_fault = o.inject_fault;
    cfg.coupling = coupling(&cfg.grading, &o.kappa)?;
    Ok(cfg)
}

fn coupling(grading: &GradingConfig, overrides: &[String]) -> Result<CouplingConfig, UsageError> {
    let mut cfg = CouplingConfig::new(grading.field());
    for item in overrides {
        let (d, v) = item.split_once('=').ok_or_else(|| UsageError(format!("--kappa expects d=VAL, got '{item}'")))?;
        let degree =
            parse_degree_token(d.trim()).ok_or_else(|| UsageError(format!("unknown degree '{d}' in --kappa")))?;
        let value = parse_expr(grading, v)?;
        if value.terms().any(|(m, _)| !m.is_empty()) {
            return Err(UsageError(format!("--kappa value '{v}' is not a scalar")));
        }
        cfg = cfg.with_kappa(degree, value.body())?;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Result<i32, UsageError> {
    let o = &cli.options;
    match &cli.command {
        Command::Verify { target } => verify(*target, o, out),
        Command::Table { which } => table(*which, o, out),
        Command::Eval { expr, adjoint, .. } => eval(expr, *adjoint, o, out),
        Command::Conventions { action: ConventionAction::Search { emit } } => search(o, emit.as_ref(), out),
    }
}

fn verify(target: Target, o: &Options, out: &mut Vec<u8>) -> Result<i32, UsageError> {
    let cfg = suite_config(o)?;
    let suites: Vec<Suite> = match target {
        Target::All => Suite::ALL.to_vec(),
        Target::Epsilon => vec![Suite::Epsilon],
        Target::Grassmann => vec![Suite::Grassmann],
        Target::Algebra => vec![Suite::Algebra],
        Target::Representation => vec![Suite::Representation],
        Target::Supergroup => vec![Suite::Supergroup],
        Target::Superspace => vec![Suite::Superspace],
    };
    let mut all_passed = true;
    for suite in suites {
        let started = std::time::Instant::now();
        let reports = run_suite(suite, &cfg)?;
        let passed = reports.iter().all(Report::passed);
        all_passed &= passed;
        let seconds = started.elapsed().as_secs_f64();
        match o.format {
            Format::Json => {
                let object = json!({
                    "schema": colorpoincare_core::report::SCHEMA_VERSION,
                    "suite": suite.name(),
                    "passed": passed,
                    "seconds": seconds,
                    "reports": reports.iter().map(Report::to_json).collect::<Vec<Value>>(),
                });
                writeln!(out, "{object}")?;
            }
            Format::Text => {
                writeln!(out, "== {} ({:.2} s)", suite.name(), seconds)?;
                for r in &reports {
                    write!(out, "{}", r.render_text(5))?;
                }
                writeln!(out, "{}: {}", suite.name(), if passed { "PASS" } else { "FAIL" })?;
            }
        }
    }
    Ok(if all_passed { EXIT_PASS } else { EXIT_FAIL })
}

fn table(which: TableKind, o: &Options, out: &mut Vec<u8>) -> Result<i32, UsageError> {
    let grading = GradingConfig::new(o.n)?;
    match which {
        TableKind::Epsilon => {
            let degrees = grading.generator_degrees();
            let labels: Vec<String> = degrees.iter().map(|d| d.label()).collect();
            match o.format {
                Format::Json => {
                    let cells: Vec<Value> = degrees
                        .iter()
                        .flat_map(|&x| degrees.iter().map(move |&y| (x, y)))
                        .map(|(x, y)| json!({"x": x.label(), "y": y.label(), "epsilon": grading.epsilon(x, y).to_string()}))
                        .collect();
                    writeln!(out, "{}", json!({"schema": 1, "table": "epsilon", "n": o.n, "cells": cells}))?;
                }
                Format::Text => {
                    write!(out, "{:>6}", "")?;
                    for l in &labels {
                        write!(out, "{l:>8}")?;
                    }
                    writeln!(out)?;
                    for (x, lx) in degrees.iter().zip(&labels) {
                        write!(out, "{lx:>6}")?;
                        for y in &degrees {
                            write!(out, "{:>8}", grading.epsilon(*x, *y).to_string())?;
                        }
                        writeln!(out)?;
                    }
                }
            }
        }
        TableKind::Brackets => {
            let cfg = suite_config(o)?;
            let sc = build(cfg.formulation, &cfg.coupling, &CliffordData::frozen(grading.field()), grading)?;
            let basis = sc.basis();
            let mut rows = Vec::new();
            for a in 0..sc.len() {
                for b in 0..sc.len() {
                    let entry = sc.entry(a, b);
                    if !entry.is_zero() {
                        rows.push((basis.get(a).to_string(), basis.get(b).to_string(), entry.render(basis)));
                    }
                }
            }
            match o.format {
                Format::Json => {
                    let cells: Vec<Value> =
                        rows.iter().map(|(a, b, v)| json!({"a": a, "b": b, "bracket": v})).collect();
                    writeln!(out, "{}", json!({"schema": 1, "table": "brackets", "cells": cells}))?;
                }
                Format::Text => {
                    for (a, b, v) in rows {
                        writeln!(out, "[{a}, {b}] = {v}")?;
                    }
                }
            }
        }
        TableKind::Blocks => {
            let layout = BlockLayout::standard();
            match o.format {
                Format::Json => {
                    writeln!(out, "{}", json!({"schema": 1, "table": "blocks", "layout": layout.to_json()}))?
                }
                Format::Text => write!(out, "{}", layout.render_grid())?,
            }
        }
    }
    Ok(EXIT_PASS)
}

fn eval(expr: &str, adjoint: bool, o: &Options, out: &mut Vec<u8>) -> Result<i32, UsageError> {
    let grading = GradingConfig::new(o.n)?;
    let value = parse_expr(&grading, expr)?;
    let value = if adjoint { value.adjoint() } else { value };
    match o.format {
        Format::Json => {
            let degree = value.homogeneous_degree().map(|d| d.label());
            writeln!(
                out,
                "{}",
                json!({"schema": 1, "input": expr, "adjoint": adjoint, "value": value.to_string(), "degree": degree})
            )?;
        }
        Format::Text => writeln!(out, "{value}")?,
    }
    Ok(EXIT_PASS)
}

fn search(o: &Options, emit: Option<&PathBuf>, out: &mut Vec<u8>) -> Result<i32, UsageError> {
    let grading = GradingConfig::new(o.n)?;
    let cfg = coupling(&grading, &o.kappa)?;
    let outcome = convention_search(&ConventionSpace::default(), grading, &cfg, true);
    let Some(first) = outcome.passing.first().copied() else {
        writeln!(out, "no convention passes ({} examined, {} rejected)", outcome.examined, outcome.rejected)?;
        return Ok(EXIT_FAIL);
    };
    let mut frozen = first;
    if let Some((two, _)) = outcome.two_component.first() {
        frozen = *two;
    }
    let record = json!({
        "schema": 1,
        "convention": frozen,
        "label": frozen.label(),
        "matches_built_in": frozen == Convention::FROZEN,
        "examined_until_first_pass": outcome.examined,
        "rejected": outcome.rejected,
        "two_component_failures": outcome.two_component.first().map(|(_, n)| *n),
        "operator_q_placement": QPlacement::FROZEN.label(),
        "operator_derivative_rule": DerivativeRule::FROZEN.label(),
        "operator_bracket_sign": -1,
    });
    if let Some(path) = emit {
        std::fs::write(path, serde_json::to_string_pretty(&record)? + "\n")
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
    }
    match o.format {
        Format::Json => writeln!(out, "{record}")?,
        Format::Text => {
            writeln!(out, "first passing convention: {}", frozen.label())?;
            writeln!(
                out,
                "examined {} candidates ({} rejected by the Clifford/C preconditions)",
                outcome.examined, outcome.rejected
            )?;
            if let Some((_, n)) = outcome.two_component.first() {
                writeln!(out, "two-component Jacobi failures at the chosen index placement: {n}")?;
            }
            writeln!(out, "matches the built-in frozen convention: {}", frozen == Convention::FROZEN)?;
        }
    }
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("colorpoincare").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn passing_suite_exits_zero() {
        let (code, out, _) = call(&["verify", "epsilon"]);
        assert_eq!(code, EXIT_PASS, "{out}");
        assert!(out.contains("epsilon: PASS"));
    }

    #[test]
    fn injected_fault_exits_one() {
        assert_eq!(call(&["verify", "epsilon", "--inject-fault"]).0, EXIT_FAIL);
        assert_eq!(call(&["verify", "grassmann", "--inject-fault"]).0, EXIT_FAIL);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["verify", "nonsense"]).0, EXIT_USAGE);
        assert_eq!(call(&["eval", "th_r[1] +"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "epsilon", "--kappa", "r"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "superspace", "--n", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_PASS);
    }

    #[test]
    fn eval_normal_orders() {
        let (code, out, _) = call(&["eval", "th_g[1]*th_r[1]"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.trim(), "q^-1*th_r[1]*th_g[1]");
        assert_eq!(call(&["eval", "eta[1]*eta[1]"]).1.trim(), "0");
    }

    #[test]
    fn json_verify_emits_one_line_per_suite() {
        let (code, out, _) = call(&["verify", "epsilon", "--report", "json"]);
        assert_eq!(code, EXIT_PASS);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 1);
        let value: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(value["suite"], "epsilon");
        assert_eq!(value["passed"], true);
        assert_eq!(value["schema"], 1);
    }
}
