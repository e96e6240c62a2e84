//! `wedge`: field maps, diffraction-coefficient tables, kernel dumps and
//! validation runs for plane-wave diffraction by a wedge.
//!
//! Exit status: 0 on success, 1 when a validation check fails, 2 on a
//! configuration error, 3 on a numerical failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, RepresentationChoice};
use config::ScenarioConfig;
use error::{CliError, CliResult};
use output::{write_outputs, Sidecar, Table};

#[derive(Parser, Debug)]
#[command(name = "wedge", version, about = "Plane-wave diffraction by ideal and impedance wedges")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output table; a `.meta.toml` sidecar is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    representation: Option<RepresentationChoice>,

    /// Worker threads for receiver-parallel evaluation.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the randomised validation draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Total field and its decomposition on a receiver grid.
    FieldMap,
    /// Far-field diffraction coefficient over an angle sweep.
    DiffractionCoeff,
    /// Edge-source directivity kernel against η at a fixed angle.
    Directivity,
    /// Residual, cross-representation and far-field checks.
    Validate,
    /// Edge-form versus contour-form totals at each receiver.
    CrossCheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::FieldMap => "field-map",
            Command::DiffractionCoeff => "diffraction-coeff",
            Command::Directivity => "directivity",
            Command::Validate => "validate",
            Command::CrossCheck => "cross-check",
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let (config, bytes) = ScenarioConfig::load(path)?;
    let out = cli
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from))
        .ok_or_else(|| CliError::Config("no output path: pass --out or set output.path".into()))?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }

    let mut representation = None;
    let mut seed = None;
    let outcome = match cli.command {
        Command::FieldMap => {
            let choice = cli.representation.unwrap_or(RepresentationChoice::Edge);
            representation = Some(choice);
            done(commands::field_map(&config, choice)?)
        }
        Command::DiffractionCoeff => done(commands::diffraction_coeff(&config)?),
        Command::Directivity => done(commands::directivity(&config)?),
        Command::Validate => {
            let choice = cli.representation.unwrap_or(RepresentationChoice::Both);
            representation = Some(choice);
            seed = Some(cli.seed);
            commands::validate(&config, choice, cli.seed)?
        }
        Command::CrossCheck => {
            representation = Some(RepresentationChoice::Both);
            commands::cross_check(&config)?
        }
    };

    let mut sidecar = Sidecar::new(cli.command.name(), &bytes, &outcome.table);
    sidecar.representation = representation.map(|r| r.name().to_string());
    sidecar.seed = seed;
    write_outputs(&out, &outcome.table, &sidecar)?;
    match outcome.failure {
        Some(msg) => Err(CliError::Validation(msg)),
        None => Ok(()),
    }
}

fn done(table: Table) -> Outcome {
    Outcome { table, failure: None }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wedge {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
