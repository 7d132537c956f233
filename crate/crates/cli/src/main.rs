// SPDX-License-Identifier: Apache-2.0

//! `eda-schema`: ingest flow artifacts into a dataset, export maps and run
//! the baseline analyses.

mod analyze;
mod config;
mod exit;
mod ingest;
mod maps;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use eda_schema::analysis::Averaging;
use eda_schema::raster::Anchor;
use eda_schema::Stage;

use crate::config::{parse_anchor, parse_averaging, Overrides, RunConfig, UncertaintyCap};

pub fn parse_stage(s: &str) -> Result<Stage, String> {
    Stage::parse(s).ok_or_else(|| format!("unknown stage `{s}`"))
}

#[derive(Debug, Parser)]
#[command(
    name = "eda-schema",
    version,
    about = "Physical-design dataset ingestion and baseline analyses"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for per-instance work; all cores when absent.
    #[arg(long, global = true)]
    jobs: Option<NonZeroUsize>,
    #[arg(long, global = true)]
    pdk: Option<String>,
    /// Metal-1 width override, µm.
    #[arg(long = "w-m1", global = true)]
    w_m1: Option<f64>,
    #[arg(long, global = true, value_parser = parse_anchor)]
    anchor: Option<Anchor>,
    /// Treat parser warnings as errors.
    #[arg(long, global = true)]
    strict: bool,
    /// Clock-uncertainty cap of the sweep: `text` or `table`.
    #[arg(long, global = true, value_parser = str::parse::<UncertaintyCap>)]
    uncertainty_cap: Option<UncertaintyCap>,
    #[arg(long, global = true, value_parser = parse_averaging)]
    averaging: Option<Averaging>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse one stage's artifacts, validate and store the snapshot.
    Ingest(Box<ingest::IngestArgs>),
    /// Export stored spatial maps.
    Maps(maps::MapsArgs),
    /// Recompute the four RUDY maps.
    Rudy(maps::RudyArgs),
    /// Cross-stage baseline report.
    Baseline(analyze::BaselineArgs),
    /// Per-circuit parameter/metric Pearson correlations.
    Correlate(analyze::CorrelateArgs),
    /// Operating class and slack-to-clock-period ratio.
    Classify(analyze::ClassifyArgs),
    /// Constraint sets of a parameter sweep.
    Sweep(analyze::SweepArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = RunConfig::load(
        cli.config.as_deref(),
        Overrides {
            pdk: cli.pdk,
            w_m1: cli.w_m1,
            anchor: cli.anchor,
            strict: cli.strict,
            uncertainty_cap: cli.uncertainty_cap,
            averaging: cli.averaging,
        },
    )?;
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN));
    match &cli.command {
        Command::Ingest(a) => ingest::run(a, &cfg),
        Command::Maps(a) => maps::run_maps(a),
        Command::Rudy(a) => maps::run_rudy(a, cfg.k),
        Command::Baseline(a) => analyze::run_baseline(a, &cfg, jobs),
        Command::Correlate(a) => analyze::run_correlate(a, jobs),
        Command::Classify(a) => analyze::run_classify(a),
        Command::Sweep(a) => analyze::run_sweep(a, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(exit::OK),
                _ => ExitCode::from(exit::USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::code_for(&e))
        }
    }
}
