//! Command-line experiment runner for the non-Hermitian qubit engine.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure
//! (any structured per-output error), 1 for I/O and other hard faults.

mod config;
mod output;
mod presets;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::ExperimentConfig;
use presets::PresetRun;
use runner::ResultBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "nhqsim",
    version,
    about = "Dynamics of PT- and APT-symmetric qubit systems: trajectories, \
             dynamical fingerprints, Liouvillian spectra",
    after_help = "Exit codes: 0 success, 2 config error, 3 numerical failure.\n\
                  NHQSIM_WORKERS limits the sweep worker count."
)]
struct Cli {
    /// Output directory for CSV/JSON files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config file.
    Run { config: PathBuf },
    /// Run a named preset (see `list-presets`).
    Preset { name: String },
    /// Sweep one parameter of a base config over a list of values.
    Sweep {
        config: PathBuf,
        /// Parameter to vary: a, b, theta, kappa, s, n_qubits, gamma1,
        /// gamma2, gamma3, gamma_collective or gamma_local.
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. `0.2,0.4,0.6`.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
    },
    /// List available presets.
    ListPresets,
}

fn init_workers() {
    if let Ok(value) = std::env::var("NHQSIM_WORKERS") {
        if let Ok(n) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn emit(bundle: &ResultBundle, cli: &Cli) -> Result<()> {
    match cli.format {
        Format::Csv => {
            let files = output::write_csv(bundle, &cli.out_dir)?;
            for f in files {
                eprintln!("wrote {}", cli.out_dir.join(f).display());
            }
        }
        Format::Json => {
            let f = output::write_json(bundle, &cli.out_dir)?;
            eprintln!("wrote {}", cli.out_dir.join(f).display());
        }
    }
    for w in &bundle.provenance.warnings {
        eprintln!("warning: {w}");
    }
    for e in &bundle.errors {
        eprintln!("error [{}]: {}", e.output, e.message);
    }
    Ok(())
}

/// Runs and emits; returns whether any structured numerical error occurred.
fn run_single(cfg: &ExperimentConfig, cli: &Cli) -> Result<bool> {
    let bundle = runner::run_experiment(cfg)?;
    emit(&bundle, cli)?;
    Ok(bundle.has_errors())
}

fn run_sweep(base: &ExperimentConfig, param: &str, values: &[f64], cli: &Cli) -> Result<bool> {
    let (bundles, summary) = runner::run_sweep(base, param, values)?;
    let mut failed = false;
    for bundle in &bundles {
        emit(bundle, cli)?;
        failed |= bundle.has_errors();
    }
    let file = output::write_summary(&base.name, &summary, &cli.out_dir)?;
    eprintln!("wrote {}", cli.out_dir.join(file).display());
    failed |= summary.iter().any(|r| r.error.is_some());
    Ok(failed)
}

fn run_preset(run: &PresetRun, cli: &Cli) -> Result<bool> {
    match run {
        PresetRun::Single(cfg) => run_single(cfg, cli),
        PresetRun::Sweep { base, param, values } => run_sweep(base, param, values, cli),
        PresetRun::Group(runs) => {
            let mut failed = false;
            for r in runs {
                failed |= run_preset(r, cli)?;
            }
            Ok(failed)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(config)
                .with_context(|| format!("reading config {}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text)?;
            run_single(&cfg, cli)
        }
        Command::Preset { name } => {
            let run = presets::build(name)
                .ok_or_else(|| anyhow!("unknown preset `{name}` (see list-presets)"))?;
            run_preset(&run, cli)
        }
        Command::Sweep {
            config,
            param,
            values,
        } => {
            if values.is_empty() {
                return Err(anyhow!("--values must list at least one number"));
            }
            let text = std::fs::read_to_string(config)
                .with_context(|| format!("reading config {}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text)?;
            run_sweep(&cfg, param, values, cli)
        }
        Command::ListPresets => {
            for (name, description) in presets::catalog() {
                println!("{name:10} {description}");
            }
            Ok(false)
        }
    }
}

/// Configuration-shaped failures exit with 2; numerical ones inside a run
/// exit with 3.
fn is_config_error(err: &anyhow::Error) -> bool {
    let text = format!("{err:#}");
    text.contains("config")
        || text.contains("unknown preset")
        || text.contains("parameter")
        || text.contains("requires")
        || text.contains("--values")
}

fn main() -> ExitCode {
    init_workers();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("completed with numerical failures (exit 3)");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_config_error(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
