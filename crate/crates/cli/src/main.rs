//! Command-line front end. Exit codes: 0 on success, 1 for configuration
//! or usage problems, 2 for data problems (unreadable, malformed, or
//! unusable input files).

mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use elicit_core::data::{Dataset, Domain};
use elicit_core::harness::{run_experiment, ExperimentResult, Scenario};
use elicit_core::ingest;
use elicit_core::strategies::StrategyKind;
use elicit_core::synth;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "elicit", version, about = "Simulates rating elicitation for new users")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario/strategy grid described by a TOML config file
    Run {
        /// Path to the run config
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a synthetic two-domain rating corpus
    Synth {
        /// Path to the generator spec
        #[arg(long)]
        spec: PathBuf,
    },
    /// Convert a key-value review dump into the four-column rating CSV
    ConvertSnap {
        /// Path to the raw dump
        #[arg(long = "in")]
        input: PathBuf,
        /// Domain to stamp on every converted rating: "target" or "auxiliary"
        #[arg(long)]
        domain: String,
        /// Where to write the converted CSV
        #[arg(long)]
        out: PathBuf,
    },
}

enum AppError {
    Config(anyhow::Error),
    Data(anyhow::Error),
}

impl AppError {
    fn report(self) -> ExitCode {
        match self {
            AppError::Config(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
            AppError::Data(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(2)
            }
        }
    }
}

trait Classify<T> {
    fn or_config(self) -> Result<T, AppError>;
    fn or_data(self) -> Result<T, AppError>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn or_config(self) -> Result<T, AppError> {
        self.map_err(|e| AppError::Config(e.into()))
    }

    fn or_data(self) -> Result<T, AppError> {
        self.map_err(|e| AppError::Data(e.into()))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(err) = init_worker_pool() {
        return err.report();
    }
    let outcome = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Synth { spec } => cmd_synth(&spec),
        Command::ConvertSnap { input, domain, out } => cmd_convert_snap(&input, &domain, &out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.report(),
    }
}

/// ELICIT_WORKERS caps the rayon pool; unset means one thread per core.
fn init_worker_pool() -> Result<(), AppError> {
    let Ok(raw) = std::env::var("ELICIT_WORKERS") else {
        return Ok(());
    };
    let workers: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| anyhow!("ELICIT_WORKERS must be a positive integer, got {raw:?}"))
        .or_config()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .context("failed to size the worker pool")
        .or_config()
}

fn load_dataset(path: &Path, domain: Domain) -> Result<Dataset, AppError> {
    let ratings = ingest::load_csv(path).or_data()?;
    Dataset::from_ratings(ratings, domain)
        .with_context(|| format!("{}", path.display()))
        .or_data()
}

fn cmd_run(config_path: &Path) -> Result<(), AppError> {
    let cfg = config::load_run_config(config_path).or_config()?;
    let target_full = load_dataset(&cfg.target_csv, Domain::Target)?;
    let (target, auxiliary) = match &cfg.auxiliary_csv {
        Some(path) => {
            let auxiliary_full = load_dataset(path, Domain::Auxiliary)?;
            ingest::filter_overlap(&target_full, &auxiliary_full, ingest::DEFAULT_MIN_PER_DOMAIN)
                .context("no users qualify for the cross-domain protocol")
                .or_data()?
        }
        None => (
            ingest::filter_min_ratings(&target_full, ingest::DEFAULT_MIN_PER_DOMAIN)
                .context("no target users have enough ratings to split")
                .or_data()?,
            Dataset::empty(Domain::Auxiliary),
        ),
    };
    log::info!(
        "target: {} users, {} ratings; auxiliary: {} users, {} ratings",
        target.user_set().len(),
        target.ratings().len(),
        auxiliary.user_set().len(),
        auxiliary.ratings().len(),
    );

    let cells: Vec<(Scenario, Option<StrategyKind>)> = cfg
        .scenarios
        .iter()
        .flat_map(|&scenario| {
            std::iter::once((scenario, None))
                .chain(cfg.strategies.iter().map(move |&kind| (scenario, Some(kind))))
        })
        .collect();
    let per_cell: Vec<Vec<ExperimentResult>> = cells
        .par_iter()
        .map(|&(scenario, strategy)| {
            let rows = run_experiment(&target, &auxiliary, scenario, strategy, &cfg.settings)?;
            log::info!(
                "{}/{}: done ({} iterations)",
                scenario.name(),
                strategy.map(StrategyKind::name).unwrap_or("none"),
                rows.len(),
            );
            Ok(rows)
        })
        .collect::<Result<_, elicit_core::harness::HarnessError>>()
        .or_data()?;
    let results: Vec<ExperimentResult> = per_cell.into_iter().flatten().collect();

    std::fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("cannot create {}", cfg.output_dir.display()))
        .or_data()?;
    let results_path = cfg.output_dir.join("results.csv");
    let table_path = cfg.output_dir.join("table1.csv");
    std::fs::write(&results_path, report::results_csv(&results))
        .with_context(|| format!("cannot write {}", results_path.display()))
        .or_data()?;
    std::fs::write(&table_path, report::table_csv(&results))
        .with_context(|| format!("cannot write {}", table_path.display()))
        .or_data()?;
    println!("wrote {} ({} rows) and {}", results_path.display(), results.len(), table_path.display());
    Ok(())
}

fn cmd_synth(spec_path: &Path) -> Result<(), AppError> {
    let cfg = config::load_synth_config(spec_path).or_config()?;
    let (target, auxiliary) = synth::generate(&cfg.spec).or_config()?;
    ingest::write_csv(&cfg.target_out, target.ratings()).or_data()?;
    ingest::write_csv(&cfg.auxiliary_out, auxiliary.ratings()).or_data()?;
    println!(
        "wrote {} ({} ratings) and {} ({} ratings)",
        cfg.target_out.display(),
        target.ratings().len(),
        cfg.auxiliary_out.display(),
        auxiliary.ratings().len(),
    );
    Ok(())
}

fn cmd_convert_snap(input: &Path, domain: &str, out: &Path) -> Result<(), AppError> {
    let domain: Domain = domain
        .parse()
        .context("--domain must be \"target\" or \"auxiliary\"")
        .or_config()?;
    let ratings = ingest::convert_snap(input, domain).or_data()?;
    ingest::write_csv(out, &ratings).or_data()?;
    println!("wrote {} ratings to {}", ratings.len(), out.display());
    Ok(())
}
