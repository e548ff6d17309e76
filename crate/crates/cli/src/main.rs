//! `qfl` — scenario runner for the quantum-foundations lab.
//!
//! ```text
//! qfl <scenario> [--seed N] [--param key=value]... [--out DIR]
//!     [--format json|csv|both] [--parallel]
//! ```
//!
//! Exit status: 0 when every invariant check passes, 1 when a check fails
//! (the failing check is named on stderr), 2 for configuration errors
//! (reported before anything is computed or written).

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use scenarios::{allowed_params, CliError, Context, OutputFormat, Params, Scenario};

#[derive(Parser, Debug)]
#[command(
    name = "qfl",
    about = "Deterministic quantum-foundations demonstrations with machine-readable reports",
    after_help = "Scenario parameters are passed as repeated --param key=value flags;\n\
                  run a scenario with an unknown key to get the allowed list.\n\
                  QFL_OUT overrides the default output directory."
)]
struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    scenario: Scenario,

    /// Base seed for every stochastic step.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Scenario parameter as key=value; may be repeated.
    #[arg(long = "param", value_parser = parse_key_value)]
    params: Vec<(String, String)>,

    /// Output directory (default: $QFL_OUT or ./qfl-out).
    #[arg(long = "out")]
    out: Option<PathBuf>,

    /// Which artifact kinds to write.
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    format: OutputFormat,

    /// Run independent scenarios concurrently (only meaningful for 'all').
    #[arg(long)]
    parallel: bool,
}

fn parse_key_value(raw: &str) -> Result<(String, String), String> {
    match raw.split_once('=') {
        Some((key, value)) if !key.is_empty() => Ok((key.to_string(), value.to_string())),
        _ => Err(format!("expected key=value, got '{raw}'")),
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("QFL_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("qfl-out"))
}

fn run_one(scenario: Scenario, cli: &Cli) -> Result<bool, CliError> {
    let params = Params::new(&cli.params, allowed_params(scenario), cli.seed)?;
    let out = out_dir(cli);
    let ctx = Context {
        out_dir: &out,
        format: cli.format,
        params,
    };
    let report = scenarios::run_scenario(scenario, &ctx)?;
    let passed = report.all_passed();
    println!(
        "{}: {} ({} checks, {} ms)",
        report.scenario,
        if passed { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.wall_time_ms
    );
    for check in &report.checks {
        println!(
            "  [{}] {} -- {}",
            if check.passed { "ok" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    for artifact in &report.artifacts {
        println!("  wrote {}", artifact.display());
    }
    if !passed {
        eprintln!(
            "{}: failing checks: {}",
            report.scenario,
            report.failed_names().join(", ")
        );
    }
    Ok(passed)
}

fn run_all(cli: &Cli) -> Result<bool, CliError> {
    if !cli.params.is_empty() {
        return Err(CliError::Usage(
            "'all' runs every scenario with defaults; per-scenario --param is not accepted".into(),
        ));
    }
    let scenarios = Scenario::all_concrete();
    let outcomes: Vec<Result<bool, CliError>> = if cli.parallel {
        scenarios.par_iter().map(|&s| run_one(s, cli)).collect()
    } else {
        scenarios.iter().map(|&s| run_one(s, cli)).collect()
    };
    let mut all_passed = true;
    for outcome in outcomes {
        all_passed &= outcome?;
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.scenario {
        Scenario::All => run_all(&cli),
        scenario => run_one(scenario, &cli),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err @ CliError::Usage(_)) => {
            eprintln!("{err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(1)
        }
    }
}
