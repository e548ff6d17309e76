//! Run reports and deterministic serialization.
//!
//! Reports serialize to JSON with every float written with 17 significant
//! digits so a parse gives back the identical bits, and with map keys in
//! BTreeMap order. Wall time is kept out of the serialized form: identical
//! (scenario, seed, parameters) must produce byte-identical files.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub inputs: BTreeMap<String, String>,
    pub values: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub wall_time_ms: u128,
    #[serde(skip)]
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            inputs: BTreeMap::new(),
            values: BTreeMap::new(),
            checks: Vec::new(),
            wall_time_ms: 0,
            artifacts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn value(&mut self, key: &str, value: f64) {
        self.values
            .insert(key.to_string(), serde_json::json!(value));
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl ToString) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.to_string(),
        });
    }

    /// `name: |measured| < bound`-style convenience.
    pub fn check_bound(&mut self, name: &str, measured: f64, bound: f64) {
        self.check(
            name,
            measured.abs() < bound,
            format!("|{measured:e}| < {bound:e}"),
        );
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// JSON formatter writing every f64 with 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value to the deterministic 17-digit JSON form.
pub fn to_json_bytes<T: Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, to_json_bytes(value)?)
}

/// Writes a CSV with a header row; every cell is already formatted.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut content = String::with_capacity(rows.len() * 32 + header.len() + 1);
    content.push_str(header);
    content.push('\n');
    for row in rows {
        content.push_str(row);
        content.push('\n');
    }
    std::fs::write(path, content)
}

/// Full-precision cell formatting for CSV output.
pub fn csv_f64(value: f64) -> String {
    format!("{value:.16e}")
}
