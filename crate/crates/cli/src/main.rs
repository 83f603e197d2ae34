//! `newstension` — batch tension analysis of news videos.
//!
//! Exit codes: 0 full success, 1 when some videos failed but the run
//! completed, 2 on configuration or input errors (including command
//! line misuse, which clap also reports as 2).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use newstension_cli::config::RunConfig;
use newstension_cli::evaluate::{run_evaluate, Baseline};
use newstension_cli::fixtures;
use newstension_cli::manifest::load_manifest;
use newstension_cli::pipeline::run_batch;

#[derive(Parser)]
#[command(name = "newstension", version, about = "Low/High tension analysis of news videos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every video in a manifest and write a line-delimited
    /// report.
    Analyze {
        /// Manifest file: one JSON object per video.
        #[arg(long)]
        manifest: PathBuf,
        /// TOML run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Report output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a finished report against annotator ground truth.
    Evaluate {
        /// Report file produced by `analyze`.
        #[arg(long)]
        reports: PathBuf,
        /// CSV ground truth: video_id,annotator_id,label.
        #[arg(long)]
        annotations: PathBuf,
        /// Baselines to evaluate alongside the fused method; repeat
        /// the flag to enable several.
        #[arg(long = "baseline", value_enum)]
        baselines: Vec<Baseline>,
        /// Evaluation output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthetic dataset utilities.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Generate the 20-video synthetic dataset (media, manifest,
    /// annotations and config) used by the acceptance tests.
    Generate {
        /// Output directory; created if missing.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run() {
        Ok(code) => code,
        Err(error) => {
            log::error!("{error:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Analyze { manifest, config, out } => analyze(&manifest, &config, &out),
        Command::Evaluate { reports, annotations, baselines, out } => {
            let mut writer = create_output(&out)?;
            run_evaluate(&reports, &annotations, &baselines, &mut writer)?;
            writer.flush()?;
            log::info!("evaluation written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fixtures { command: FixturesCommand::Generate { out } } => {
            let count = fixtures::generate(&out)?;
            log::info!("generated {count} fixture videos in {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn analyze(manifest_path: &Path, config_path: &Path, out: &Path) -> Result<ExitCode> {
    let config = RunConfig::load(config_path)?;
    let config_dir = config_path.parent().unwrap_or_else(|| Path::new("."));
    let entries = load_manifest(manifest_path)?;

    let mut writer = create_output(out)?;
    let outcome = run_batch(&entries, &config, config_dir, &mut writer)?;
    writer.flush()?;

    let analyzed = entries.len() - outcome.failures;
    log::info!("analyzed {analyzed} of {} videos; report at {}", entries.len(), out.display());
    if outcome.failures > 0 {
        log::warn!("{} videos failed; their records carry the error text", outcome.failures);
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn create_output(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating output {}", path.display()))?;
    Ok(BufWriter::new(file))
}
