//! Report assembly and atomic output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format, OutputArgs, TorusChoice};
use dlcusp::groups::Bounds;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct BoundsConfig {
    pub gl2_q: u64,
    pub gl2_x_gl2_q: u64,
    pub theta: u64,
}

impl From<&Bounds> for BoundsConfig {
    fn from(b: &Bounds) -> Self {
        BoundsConfig { gl2_q: b.gl2_q, gl2_x_gl2_q: b.gl2_x_gl2_q, theta: b.theta }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub involutions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusChoice>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub format: Format,
    pub jobs: usize,
    pub no_timing: bool,
    pub bounds: BoundsConfig,
}

impl RunConfig {
    pub fn new(command: &str, output: &OutputArgs, bounds: &Bounds) -> Self {
        RunConfig {
            command: command.to_string(),
            group: None,
            q: Vec::new(),
            involutions: Vec::new(),
            torus: None,
            lambda: Vec::new(),
            data: None,
            random: None,
            seed: None,
            format: output.format,
            jobs: output.jobs,
            no_timing: output.no_timing,
            bounds: bounds.into(),
        }
    }
}

/// Flat rows for CSV output.
#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub config: RunConfig,
    pub results: Vec<Value>,
    pub failures: Vec<Value>,
    #[serde(skip)]
    pub csv: Option<CsvTable>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report { version: VERSION, config, results: Vec::new(), failures: Vec::new(), csv: None }
    }

    pub fn push<T: Serialize>(&mut self, result: &T) -> Result<(), CliError> {
        self.results.push(to_value(result)?);
        Ok(())
    }

    pub fn fail<T: Serialize>(&mut self, failure: &T) -> Result<(), CliError> {
        self.failures.push(to_value(failure)?);
        Ok(())
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self).map_err(|e| CliError::Internal(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let table = self
                    .csv
                    .as_ref()
                    .ok_or_else(|| CliError::Config(format!("csv output is not available for `{}`", self.config.command)))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                let csv_err = |e: csv::Error| CliError::Internal(e.to_string());
                w.write_record(&table.header).map_err(csv_err)?;
                for row in &table.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
            }
        }
    }

    /// Writes to `--out` (temporary file then rename) or to standard output.
    pub fn emit(&self, output: &OutputArgs) -> Result<(), CliError> {
        let bytes = self.render(output.format)?;
        match &output.out {
            Some(path) => write_atomic(path, &bytes),
            None => {
                std::io::stdout().write_all(&bytes)?;
                Ok(())
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
