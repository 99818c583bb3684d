//! Batch experiment runner: reads a TOML config of `[[experiment]]`
//! entries, runs each through the matching command, and emits one JSON
//! document (plus optional CSV profiles).

pub mod commands;
pub mod config;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use amenable_entropy::bowen::DEFAULT_ATOM_BUDGET;
use amenable_entropy::Execution;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{parse_config, CommandName, ConfigFile, ExperimentEntry, Units};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Compute(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Budget(_) => "budget",
            CliError::Compute(_) => "computation",
            CliError::Io(_) => "io",
        }
    }
}

impl From<amenable_entropy::Error> for CliError {
    fn from(e: amenable_entropy::Error) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Compute(e.to_string())
        }
    }
}

/// Settings shared by every experiment of a run.
#[derive(Clone, Copy, Debug)]
pub struct RunContext {
    pub seed: u64,
    pub units: Units,
    pub budget_atoms: usize,
    pub exec: Execution,
}

impl Default for RunContext {
    fn default() -> Self {
        RunContext {
            seed: DEFAULT_SEED,
            units: Units::Nats,
            budget_atoms: DEFAULT_ATOM_BUDGET,
            exec: Execution::default(),
        }
    }
}

/// Command-line overrides; `None` defers to the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub units: Option<Units>,
    pub budget_atoms: Option<usize>,
    pub sequential: bool,
}

impl RunContext {
    pub fn resolve(cfg: &ConfigFile, o: &Overrides) -> Self {
        let d = RunContext::default();
        RunContext {
            seed: o.seed.or(cfg.seed).unwrap_or(d.seed),
            units: o.units.or(cfg.units).unwrap_or(d.units),
            budget_atoms: o.budget_atoms.or(cfg.budget_atoms).unwrap_or(d.budget_atoms),
            exec: if o.sequential { Execution::Sequential } else { d.exec },
        }
    }
}

/// A CSV table attached to an experiment result.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: Value,
    pub table: Option<Table>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub name: String,
    pub command: CommandName,
    pub seed: u64,
    pub params: Value,
    pub result: Value,
}

#[derive(Debug)]
pub struct ExperimentFailure {
    pub experiment: String,
    pub error: CliError,
}

#[derive(Debug)]
pub struct RunOutput {
    pub records: Vec<ExperimentRecord>,
    pub tables: Vec<(String, Table)>,
}

/// Runs the selected experiments (all when `only` is `None`). Experiments
/// execute concurrently; records keep config order, and the first failure
/// in that order is reported.
pub fn run_experiments(
    cfg: &ConfigFile,
    ctx: RunContext,
    only: Option<CommandName>,
) -> Result<RunOutput, ExperimentFailure> {
    let selected: Vec<&ExperimentEntry> = cfg
        .experiments
        .iter()
        .filter(|e| only.is_none_or(|c| c == e.command))
        .collect();
    if selected.is_empty() {
        return Err(ExperimentFailure {
            experiment: String::new(),
            error: CliError::Config("no experiment matches the selected command".into()),
        });
    }
    let outcomes = ctx.exec.map(&selected, |e| {
        let seed = e.seed.unwrap_or(ctx.seed);
        commands::run(e, RunContext { seed, ..ctx }).map(|o| (seed, o))
    });
    let mut records = Vec::with_capacity(selected.len());
    let mut tables = Vec::new();
    for (e, outcome) in selected.iter().zip(outcomes) {
        let (seed, o) = outcome.map_err(|error| ExperimentFailure {
            experiment: e.name.clone(),
            error,
        })?;
        if let Some(t) = o.table {
            tables.push((e.name.clone(), t));
        }
        records.push(ExperimentRecord {
            name: e.name.clone(),
            command: e.command,
            seed,
            params: serde_json::to_value(&e.params).expect("TOML tables serialize"),
            result: o.result,
        });
    }
    Ok(RunOutput { records, tables })
}

pub fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn document(records: &[ExperimentRecord], ctx: &RunContext, config_path: &Path, timestamp: u64) -> Value {
    json!({
        "metadata": {
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": timestamp,
            "config": config_path.display().to_string(),
            "units": ctx.units,
            "seed": ctx.seed,
            "budget_atoms": ctx.budget_atoms,
        },
        "experiments": records,
    })
}

pub fn error_document(f: &ExperimentFailure) -> Value {
    json!({
        "error": {
            "kind": f.error.kind(),
            "message": f.error.to_string(),
            "experiment": f.experiment,
            "exit_code": f.error.exit_code(),
        }
    })
}

pub fn write_tables(dir: &Path, tables: &[(String, Table)]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
    let mut written = Vec::new();
    for (name, t) in tables {
        let file: String = name
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        let path = dir.join(format!("{file}.csv"));
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Io(e.to_string()))?;
        w.write_record(&t.headers).map_err(|e| CliError::Io(e.to_string()))?;
        for r in &t.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        written.push(path);
    }
    Ok(written)
}
