//! Scenario implementations. Each scenario validates its parameters before
//! computing anything, runs the relevant operations, writes its artifacts
//! under `<out>/<scenario>/` and returns a [`RunReport`] whose checks
//! decide the exit status.

mod fields;
mod spin;
mod thermal;
mod waves;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::report::RunReport;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration: reported before any computation, exit code 2.
    Usage(String),
    /// Anything that stops a scenario mid-flight: exit code 1.
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Failure(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<qfl_core::Error> for CliError {
    fn from(e: qfl_core::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("io error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Validated per-scenario parameters: `--param key=value` pairs checked
/// against the scenario's allowed keys before use.
pub struct Params {
    map: BTreeMap<String, String>,
    pub seed: u64,
}

impl Params {
    pub fn new(pairs: &[(String, String)], allowed: &[&str], seed: u64) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for (key, value) in pairs {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown parameter '{key}' (allowed: {})",
                    allowed.join(", ")
                )));
            }
            map.insert(key.clone(), value.clone());
        }
        Ok(Self { map, seed })
    }

    pub fn get_f64(&self, key: &str, default: f64) -> CliResult<f64> {
        match self.map.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                CliError::Usage(format!("parameter '{key}' = '{raw}' is not a number"))
            }),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.map.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                CliError::Usage(format!("parameter '{key}' = '{raw}' is not an integer"))
            }),
        }
    }

    pub fn get_i64(&self, key: &str, default: i64) -> CliResult<i64> {
        match self.map.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                CliError::Usage(format!("parameter '{key}' = '{raw}' is not an integer"))
            }),
        }
    }

    pub fn get_str(&self, key: &str, default: &str) -> String {
        self.map
            .get(key)
            .cloned()
            .unwrap_or_else(|| default.to_string())
    }

    pub fn get_path(&self, key: &str) -> Option<PathBuf> {
        self.map.get(key).map(PathBuf::from)
    }

    /// Echo everything (defaults resolved by the caller) into the report.
    pub fn echo_into(&self, report: &mut RunReport) {
        report.input("seed", self.seed);
        for (key, value) in &self.map {
            report.input(key, value);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    Hardy,
    Sequential,
    Epr,
    PauliObstruction,
    DoubleSlit,
    QuantumPotential,
    NonlocalQ,
    KgNegativity,
    DiracCheck,
    FockSpectrum,
    Quench,
    Unruh,
    Hawking,
    Blackhole,
    All,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Hardy => "hardy",
            Scenario::Sequential => "sequential",
            Scenario::Epr => "epr",
            Scenario::PauliObstruction => "pauli-obstruction",
            Scenario::DoubleSlit => "double-slit",
            Scenario::QuantumPotential => "quantum-potential",
            Scenario::NonlocalQ => "nonlocal-q",
            Scenario::KgNegativity => "kg-negativity",
            Scenario::DiracCheck => "dirac-check",
            Scenario::FockSpectrum => "fock-spectrum",
            Scenario::Quench => "quench",
            Scenario::Unruh => "unruh",
            Scenario::Hawking => "hawking",
            Scenario::Blackhole => "blackhole",
            Scenario::All => "all",
        }
    }

    pub fn all_concrete() -> &'static [Scenario] {
        &[
            Scenario::Hardy,
            Scenario::Sequential,
            Scenario::Epr,
            Scenario::PauliObstruction,
            Scenario::DoubleSlit,
            Scenario::QuantumPotential,
            Scenario::NonlocalQ,
            Scenario::KgNegativity,
            Scenario::DiracCheck,
            Scenario::FockSpectrum,
            Scenario::Quench,
            Scenario::Unruh,
            Scenario::Hawking,
            Scenario::Blackhole,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

/// Everything a scenario needs to run.
pub struct Context<'a> {
    pub out_dir: &'a Path,
    pub format: OutputFormat,
    pub params: Params,
}

impl Context<'_> {
    /// Directory for this scenario's artifacts.
    pub fn scenario_dir(&self, scenario: Scenario) -> PathBuf {
        self.out_dir.join(scenario.name())
    }
}

/// Runs one concrete scenario and stamps the wall time.
pub fn run_scenario(scenario: Scenario, ctx: &Context) -> CliResult<RunReport> {
    let start = Instant::now();
    let mut report = match scenario {
        Scenario::Hardy => spin::hardy(ctx)?,
        Scenario::Sequential => spin::sequential(ctx)?,
        Scenario::Epr => spin::epr(ctx)?,
        Scenario::PauliObstruction => spin::pauli_obstruction(ctx)?,
        Scenario::DoubleSlit => waves::double_slit(ctx)?,
        Scenario::QuantumPotential => waves::quantum_potential(ctx)?,
        Scenario::NonlocalQ => waves::nonlocal_q(ctx)?,
        Scenario::KgNegativity => fields::kg_negativity(ctx)?,
        Scenario::DiracCheck => fields::dirac_check(ctx)?,
        Scenario::FockSpectrum => fields::fock_spectrum(ctx)?,
        Scenario::Quench => thermal::quench(ctx)?,
        Scenario::Unruh => thermal::unruh(ctx)?,
        Scenario::Hawking => thermal::hawking(ctx)?,
        Scenario::Blackhole => thermal::blackhole(ctx)?,
        Scenario::All => {
            return Err(CliError::Usage(
                "'all' is dispatched by the caller, not run_scenario".into(),
            ))
        }
    };
    report.wall_time_ms = start.elapsed().as_millis();
    if ctx.format.json() {
        let path = ctx.scenario_dir(scenario).join("report.json");
        crate::report::write_json(&path, &report)?;
        report.artifacts.push(path);
    }
    Ok(report)
}

/// The allowed `--param` keys per scenario, used for validation and help.
pub fn allowed_params(scenario: Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::Hardy | Scenario::Epr => &[],
        Scenario::Sequential => &["runs"],
        Scenario::PauliObstruction => &["trials", "max_dim"],
        Scenario::DoubleSlit => &[
            "n_points",
            "dt",
            "snapshots",
            "sigma",
            "offset",
            "momentum",
            "trajectories",
            "csv_stride",
        ],
        Scenario::QuantumPotential => &["n_points", "sigma"],
        Scenario::NonlocalQ => &["n_points", "separation", "sigma"],
        Scenario::KgNegativity => &["n1", "n2", "mass", "length", "t_max", "grid", "field"],
        Scenario::DiracCheck => &["spinors"],
        Scenario::FockSpectrum => &["dim", "omega", "potential", "mass", "basis_omega"],
        Scenario::Quench => &["m_in", "m_out", "length", "n_max", "truncation"],
        Scenario::Unruh => &["acceleration", "omega_min", "omega_max", "count"],
        Scenario::Hawking => &["mass", "g", "omega_min", "omega_max", "count"],
        Scenario::Blackhole => &["mass", "g", "dm", "mergers"],
        Scenario::All => &[],
    }
}
