//! `wops` command-line front end.
//!
//! Exit codes: 0 when everything verified, 1 when a mathematical violation
//! was found, 2 for usage or configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use wops::config::{Mode, Resolved, RunConfig};
use wops::report::{classify, export, run_verify, ExportKind};
use wops::{Error, Execution};

#[derive(Parser)]
#[command(
    name = "wops",
    version,
    about = "Exact verification of semiclassical multivariate orthogonal polynomials"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `max_degree` from the config.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Overrides `mode` from the config.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run every sweep on the current thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Verify,
    Explore,
}

#[derive(Subcommand)]
enum Command {
    /// Weak Pearson residuals, class number and det⟨u, Φ⟩.
    Classify,
    /// Basis, recurrences and every structure relation up to the degree.
    Verify,
    /// Emit moments, wops, recurrence, structure or ddr as JSON.
    Export { what: String },
}

enum Failure {
    Usage(String),
    Violation(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Violation(serde_json::json!({
                "passed": false,
                "violations": [{"kind": e.kind(), "message": e.to_string()}],
            }))
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Usage("--config is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(n) = cli.degree {
        cfg.max_degree = n;
    }
    if let Some(m) = cli.mode {
        cfg.mode = match m {
            ModeArg::Verify => Mode::Verify,
            ModeArg::Explore => Mode::Explore,
        };
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let cfg = load(cli)?;
    match &cli.command {
        Command::Classify => {
            let Resolved {
                functional,
                pair,
                max_degree,
                ..
            } = cfg.resolve()?;
            let rep = classify(exec, &functional, &pair, max_degree)?;
            eprintln!(
                "p = {}, q = {}, s = {}, det<u, Phi> = {}, residuals {}",
                rep.p,
                rep.q,
                rep.s,
                rep.det_condition,
                if rep.residuals_zero { "zero" } else { "NONZERO" }
            );
            Ok((to_value(&rep), rep.passed))
        }
        Command::Verify => {
            let r = cfg.resolve()?;
            let rep = run_verify(exec, &r.functional, &r.pair, r.max_degree, r.mode.into())?;
            eprintln!(
                "{} checks, {} violations, {} warnings",
                rep.checks.len(),
                rep.violations.len(),
                rep.warnings.len()
            );
            let mut v = to_value(&rep);
            v["passed"] = Value::Bool(rep.passed());
            Ok((v, rep.passed()))
        }
        Command::Export { what } => {
            let kind: ExportKind = what.parse()?;
            let needs_pair = matches!(kind, ExportKind::Structure | ExportKind::Ddr);
            if cfg.max_degree < 1 {
                return Err(Error::BadParameter("max_degree must be at least 1".into()).into());
            }
            let (u, pair) = if needs_pair {
                let r = cfg.resolve()?;
                (r.functional, Some(r.pair))
            } else {
                (cfg.functional()?, None)
            };
            let doc = export(exec, kind, &u, pair.as_ref(), cfg.max_degree, cfg.mode.into())?;
            Ok((doc, true))
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn emit(cli: &Cli, v: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).expect("json") + "\n";
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli) {
        Ok((v, true)) => (v, 0),
        Ok((v, false)) => (v, 1),
        Err(Failure::Violation(v)) => (v, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(&cli, &value) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
