//! `fanoring` — sweep runner for the quantum-plasmonic nanoring models.
//!
//! Subcommands select the scenario; `--config` points at a TOML document
//! whose every field has a reference default (the empty document is valid).
//! Log verbosity comes from the `FANORING_LOG` environment variable
//! (error/warn/info/debug/trace).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fanoring_cli::config::{
    parse_config, parse_grid_spec, resolve, OutputFormat, Scenario, ScenarioConfig,
};
use fanoring_cli::output::{write_csv, write_json};
use fanoring_cli::scenario::run_scenario;
use fanoring_cli::{Error, Result};

#[derive(Parser)]
#[command(name = "fanoring", version, about = "Fano-interference nanoring metamaterial sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polarizability of a single MNP-QD metamolecule (linear regime).
    Metamolecule(RunArgs),
    /// Effective permeability of the bare MNP nanoring.
    BareRing(RunArgs),
    /// Effective permeability of the QD-loaded nanoring.
    QdRing(RunArgs),
    /// Intensity-dependent metamolecule polarizability (master equation).
    Nonlinear(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; omitted means all defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file path (default: <scenario>.<format>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Sweep override START:STOP:POINTS; bounds in rad/s or with a THz suffix.
    #[arg(long)]
    grid: Option<String>,
}

fn load_config(args: &RunArgs, scenario: Scenario) -> Result<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => ScenarioConfig::default(),
    };
    cfg.scenario = scenario;
    if let Some(spec) = &args.grid {
        cfg.grid = parse_grid_spec(spec)?;
    }
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(format) = args.format {
        cfg.output.format = Some(format);
    }
    Ok(cfg)
}

fn execute(args: &RunArgs, scenario: Scenario) -> Result<()> {
    let cfg = load_config(args, scenario)?;
    let resolved = resolve(&cfg)?;
    log::info!(
        "running {} over {} points in [{:.6e}, {:.6e}] rad/s (hash {})",
        resolved.scenario.name(),
        resolved.grid.len(),
        resolved.grid.first().copied().unwrap_or(f64::NAN),
        resolved.grid.last().copied().unwrap_or(f64::NAN),
        &resolved.param_hash[..12.min(resolved.param_hash.len())]
    );
    let table = run_scenario(&resolved)?;
    let format = resolved.format;
    let out = resolved.out.unwrap_or_else(|| {
        PathBuf::from(format!(
            "{}.{}",
            resolved.scenario.name(),
            match format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
        ))
    });
    match format {
        OutputFormat::Csv => write_csv(&table, &out)?,
        OutputFormat::Json => write_json(&table, &out)?,
    }
    log::info!("wrote {} rows to {}", table.rows.len(), out.display());
    println!("{}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FANORING_LOG", "warn")).init();
    let cli = Cli::parse();
    let (args, scenario) = match &cli.command {
        Command::Metamolecule(a) => (a, Scenario::Metamolecule),
        Command::BareRing(a) => (a, Scenario::BareRing),
        Command::QdRing(a) => (a, Scenario::QdRing),
        Command::Nonlinear(a) => (a, Scenario::Nonlinear),
    };
    match execute(args, scenario) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fanoring: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
