use std::path::PathBuf;
use std::process::ExitCode;

use amenable_entropy_cli::{
    document, error_document, parse_config, run_experiments, unix_timestamp, write_tables, CliError, CommandName,
    ExperimentFailure, Overrides, RunContext, Units,
};
use clap::{Parser, Subcommand};

/// Finite-scale entropy experiments for shift actions of amenable groups.
#[derive(Debug, Parser)]
#[command(name = "amenable-entropy", version)]
struct Cli {
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed for every experiment without its own.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    /// Largest exactly-solved cover component, in atoms.
    #[arg(long, global = true)]
    budget_atoms: Option<usize>,
    /// Also write per-experiment CSV profiles into this directory.
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// Run every experiment in the config (default).
    Run,
    FolnerCheck,
    Htop,
    Bowen,
    LocalEntropy,
    Smb,
    VpCheck,
    DualityCheck,
    LnBound,
}

impl Cmd {
    fn filter(self) -> Option<CommandName> {
        Some(match self {
            Cmd::Run => return None,
            Cmd::FolnerCheck => CommandName::FolnerCheck,
            Cmd::Htop => CommandName::Htop,
            Cmd::Bowen => CommandName::Bowen,
            Cmd::LocalEntropy => CommandName::LocalEntropy,
            Cmd::Smb => CommandName::Smb,
            Cmd::VpCheck => CommandName::VpCheck,
            Cmd::DualityCheck => CommandName::DualityCheck,
            Cmd::LnBound => CommandName::LnBound,
        })
    }
}

fn emit(cli: &Cli, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serializes");
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(cli: &Cli, f: ExperimentFailure) -> ExitCode {
    eprintln!("error: {}", f.error);
    let code = f.error.exit_code();
    let _ = emit(cli, &error_document(&f));
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let failure = |error| ExperimentFailure {
        experiment: String::new(),
        error,
    };
    let Some(path) = cli.config.clone() else {
        return fail(&cli, failure(CliError::Config("--config PATH is required".into())));
    };
    let cfg = match std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        .and_then(|t| parse_config(&t))
    {
        Ok(c) => c,
        Err(e) => return fail(&cli, failure(e)),
    };
    let ctx = RunContext::resolve(
        &cfg,
        &Overrides {
            seed: cli.seed,
            units: cli.units,
            budget_atoms: cli.budget_atoms,
            sequential: cli.sequential,
        },
    );
    let only = cli.command.unwrap_or(Cmd::Run).filter();
    let out = match run_experiments(&cfg, ctx, only) {
        Ok(o) => o,
        Err(f) => return fail(&cli, f),
    };
    if let Some(dir) = &cli.csv_dir {
        if let Err(e) = write_tables(dir, &out.tables) {
            return fail(&cli, failure(e));
        }
    }
    match emit(&cli, &document(&out.records, &ctx, &path, unix_timestamp())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&cli, failure(e)),
    }
}
