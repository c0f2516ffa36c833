//! Configuration and report writing behind the `gsfl` command.
//!
//! Three modes:
//! - `simulate` runs a protocol session and writes `transcript.jsonl`,
//!   `loss.csv` and `timing.json`;
//! - `costs` writes the analytic comparison for all six schemes to
//!   `costs.<fmt>`, plus `cost_grid.<fmt>` over the standard iteration counts;
//! - `attacks` runs the adversarial scenarios and writes `attacks.<fmt>`.

pub mod attacks;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{CurveProfile, CURVE_PROFILE};
use crate::costmodel::{self, CostError, CostReport, UnitCosts};
use crate::fedlearn;
use crate::protocol::{self, ProtocolError, SessionConfig};

pub use attacks::{run_attack_suite, ScenarioOutcome, SCENARIOS};

/// Environment variable naming the curve profile.
pub const CURVE_PROFILE_ENV: &str = "GSFL_CURVE_PROFILE";

/// Iteration counts used by the published comparison tables.
pub const TABLE_ITERATIONS: [u64; 5] = [1, 50, 100, 150, 1000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Costs,
    Attacks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Jsonl,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Jsonl => "jsonl",
        }
    }
}

macro_rules! keyword_enum {
    ($ty:ident, $field:literal, $($name:literal => $variant:ident),+) => {
        impl FromStr for $ty {
            type Err = HarnessError;
            fn from_str(s: &str) -> Result<Self, HarnessError> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(HarnessError::config($field, format!("unknown value {s:?}"))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $name,)+ })
            }
        }
    };
}

keyword_enum!(Mode, "mode", "simulate" => Simulate, "costs" => Costs, "attacks" => Attacks);
keyword_enum!(OutputFormat, "format", "csv" => Csv, "json" => Json, "jsonl" => Jsonl);

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error in `{field}`: {message}")]
    Config {
        field: &'static str,
        message: String,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl HarnessError {
    fn config(field: &'static str, message: impl Into<String>) -> Self {
        HarnessError::Config {
            field,
            message: message.into(),
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub m: u64,
    pub n: u64,
    pub t: u64,
    pub seed: u64,
    pub d: usize,
    pub samples_per_client: usize,
    pub eta: f64,
    pub mode: Mode,
    pub out: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 20,
            n: 10,
            t: 5,
            seed: 7,
            d: 5,
            samples_per_client: 20,
            eta: fedlearn::DEFAULT_ETA,
            mode: Mode::Simulate,
            out: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n < 1 {
            return Err(HarnessError::config("n", "must be at least 1"));
        }
        if self.m < self.n {
            return Err(HarnessError::config(
                "m",
                format!("must be >= n ({}), got {}", self.n, self.m),
            ));
        }
        if self.t < 1 {
            return Err(HarnessError::config("t", "must be at least 1"));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(HarnessError::config(
                "eta",
                format!("must be positive and finite, got {}", self.eta),
            ));
        }
        if self.d < 1 {
            return Err(HarnessError::config("d", "must be at least 1"));
        }
        if self.samples_per_client < 1 {
            return Err(HarnessError::config("samples", "must be at least 1"));
        }
        if self.mode == Mode::Simulate {
            if u32::try_from(self.t).is_err() {
                return Err(HarnessError::config(
                    "t",
                    "must fit in 32 bits for simulation",
                ));
            }
            if u32::try_from(self.m).is_err() {
                return Err(HarnessError::config(
                    "m",
                    "must fit in 32 bits for simulation",
                ));
            }
        }
        Ok(())
    }

    fn session_config(&self) -> SessionConfig {
        SessionConfig {
            m: self.m as usize,
            n: self.n as usize,
            t: self.t as u32,
            seed: self.seed,
            d: self.d,
            samples_per_client: self.samples_per_client,
            eta: self.eta,
            group_id: 1,
        }
    }
}

/// Check `GSFL_CURVE_PROFILE` if set.
pub fn curve_profile_from_env() -> Result<CurveProfile, HarnessError> {
    match std::env::var(CURVE_PROFILE_ENV) {
        Err(_) => Ok(CurveProfile::active()),
        Ok(name) => CurveProfile::by_name(&name).ok_or_else(|| {
            HarnessError::config(
                "GSFL_CURVE_PROFILE",
                format!("unsupported curve profile {name:?}; available: {CURVE_PROFILE}"),
            )
        }),
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Names of failed checks; empty on success.
    pub failures: Vec<String>,
    pub summary: String,
}

impl RunReport {
    /// 0 when every check passed, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            3
        }
    }
}

pub fn run(config: &RunConfig) -> Result<RunReport, HarnessError> {
    config.validate()?;
    curve_profile_from_env()?;
    fs::create_dir_all(&config.out).map_err(|e| io_err(&config.out, e))?;
    match config.mode {
        Mode::Simulate => run_simulate(config),
        Mode::Costs => run_costs(config),
        Mode::Attacks => run_attacks(config),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

fn write_rows<T: Serialize>(
    path: &Path,
    format: OutputFormat,
    rows: &[T],
) -> Result<(), HarnessError> {
    let mut w = create(path)?;
    let ser = |e: &dyn fmt::Display| HarnessError::Serialize(e.to_string());
    match format {
        OutputFormat::Csv => {
            let mut csv_w = csv::Writer::from_writer(&mut w);
            for row in rows {
                csv_w.serialize(row).map_err(|e| ser(&e))?;
            }
            csv_w.flush().map_err(|e| io_err(path, e))?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rows).map_err(|e| ser(&e))?;
            w.write_all(b"\n").map_err(|e| io_err(path, e))?;
        }
        OutputFormat::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut w, row).map_err(|e| ser(&e))?;
                w.write_all(b"\n").map_err(|e| io_err(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

#[derive(Serialize)]
struct TimingSummary<'a> {
    config: &'a RunConfig,
    wall_clock_ms: f64,
    admin_ms: f64,
    server_ms: f64,
    clients_ms: f64,
    messages: usize,
    signaling_count: u64,
    admin_fetches: u64,
    metrics: &'a protocol::ServerMetrics,
    expired: u64,
    client_errors: Vec<String>,
}

fn run_simulate(config: &RunConfig) -> Result<RunReport, HarnessError> {
    let started = std::time::Instant::now();
    let outcome = protocol::run_session_with(config.session_config())?;
    let wall = started.elapsed();

    let transcript_path = config.out.join("transcript.jsonl");
    let mut w = create(&transcript_path)?;
    outcome
        .transcript
        .write_jsonl(&mut w)
        .map_err(|e| io_err(&transcript_path, e))?;
    w.flush().map_err(|e| io_err(&transcript_path, e))?;

    let loss_path = config.out.join("loss.csv");
    fedlearn::write_loss_csv(&outcome.losses, create(&loss_path)?)
        .map_err(|e| HarnessError::Serialize(e.to_string()))?;

    let ms = |d: std::time::Duration| d.as_secs_f64() * 1000.0;
    let timing = TimingSummary {
        config,
        wall_clock_ms: ms(wall),
        admin_ms: ms(outcome.timings.admin),
        server_ms: ms(outcome.timings.server),
        clients_ms: ms(outcome.timings.clients),
        messages: outcome.transcript.len(),
        signaling_count: outcome.transcript.signaling_count(),
        admin_fetches: outcome.metrics.admin_fetches,
        metrics: &outcome.metrics,
        expired: outcome.expired,
        client_errors: outcome
            .client_errors
            .iter()
            .map(|(h, e)| format!("{h}: {e}"))
            .collect(),
    };
    let timing_path = config.out.join("timing.json");
    let mut w = create(&timing_path)?;
    serde_json::to_writer_pretty(&mut w, &timing)
        .map_err(|e| HarnessError::Serialize(e.to_string()))?;
    w.flush().map_err(|e| io_err(&timing_path, e))?;

    let mut failures: Vec<String> = outcome
        .client_errors
        .iter()
        .map(|(h, e)| format!("{h}: {e}"))
        .collect();
    if outcome.metrics.rejected_total() > 0 {
        failures.push(format!(
            "server rejected {} honest messages",
            outcome.metrics.rejected_total()
        ));
    }
    let (first, last) = (
        outcome.losses[0].1,
        outcome.losses[outcome.losses.len() - 1].1,
    );
    Ok(RunReport {
        files: vec![transcript_path, loss_path, timing_path],
        failures,
        summary: format!(
            "{} messages, signaling {}, loss {first:.6} -> {last:.6}",
            outcome.transcript.len(),
            outcome.transcript.signaling_count()
        ),
    })
}

fn run_costs(config: &RunConfig) -> Result<RunReport, HarnessError> {
    let u = UnitCosts::default();
    let rows = costmodel::all_reports(config.t, config.m, config.n, &u)?;
    let path = config
        .out
        .join(format!("costs.{}", config.format.extension()));
    write_rows(&path, config.format, &rows)?;

    let mut grid: Vec<CostReport> = Vec::new();
    for t in TABLE_ITERATIONS {
        grid.extend(costmodel::all_reports(t, config.m, config.n, &u)?);
    }
    let grid_path = config
        .out
        .join(format!("cost_grid.{}", config.format.extension()));
    write_rows(&grid_path, config.format, &grid)?;

    let gsfl = rows
        .iter()
        .find(|r| r.algorithm == "GSFL")
        .expect("GSFL row present");
    Ok(RunReport {
        files: vec![path, grid_path],
        failures: vec![],
        summary: format!(
            "GSFL t={}: {:.3} ms, {} B, {} messages",
            config.t, gsfl.computation_ms, gsfl.communication_bytes, gsfl.signaling_count
        ),
    })
}

fn run_attacks(config: &RunConfig) -> Result<RunReport, HarnessError> {
    let outcomes = run_attack_suite(config.seed);
    let path = config
        .out
        .join(format!("attacks.{}", config.format.extension()));
    write_rows(&path, config.format, &outcomes)?;
    let failures: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name.to_string())
        .collect();
    let passed = outcomes.len() - failures.len();
    Ok(RunReport {
        files: vec![path],
        summary: format!("{passed}/{} scenarios passed", outcomes.len()),
        failures,
    })
}
