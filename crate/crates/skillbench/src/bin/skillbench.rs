use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use skillbench::commands::{self, parse_pair, Overrides};
use skillbench::config::RunConfigFile;

/// Benchmark skill-rating systems under active match selection.
#[derive(Parser)]
#[command(name = "skillbench", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; replaces `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory; replaces `out` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Accuracy of every emulator × acquisition function at each checkpoint.
    Table,
    /// Train and eval accuracy until the training pool runs out.
    Curve {
        /// Budget spacing of the curve.
        #[arg(long)]
        step: Option<usize>,
    },
    /// TrueSkill parameter sweeps with GP-smoothed surfaces.
    Sensitivity {
        /// Comma-separated pairs, e.g. `sigma-beta,beta-tau`.
        #[arg(long, value_delimiter = ',')]
        pairs: Option<Vec<String>>,
        /// Grid points per axis (odd).
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        runs_per_point: Option<usize>,
    },
    /// Generate a synthetic dataset with known latent skills.
    Synth,
    /// Check a match file and summarise it.
    ValidateDataset {
        /// Dataset to check; defaults to the configured one.
        path: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<Vec<PathBuf>> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfigFile::load(p)?,
        None if matches!(cli.command, Cmd::ValidateDataset { path: Some(_) }) => RunConfigFile::default(),
        None => anyhow::bail!("--config is required for this command"),
    };
    let ov = Overrides { seed: cli.seed, out: cli.out, jobs: cli.jobs };
    match cli.command {
        Cmd::Table => commands::table(cfg, &ov),
        Cmd::Curve { step } => {
            if let Some(s) = step {
                cfg.curve.step = s;
            }
            commands::curve(cfg, &ov)
        }
        Cmd::Sensitivity { pairs, resolution, runs_per_point } => {
            if let Some(p) = pairs {
                cfg.sensitivity.pairs = p.iter().map(|s| parse_pair(s)).collect::<anyhow::Result<_>>()?;
            }
            if let Some(r) = resolution {
                cfg.sensitivity.resolution = r;
            }
            if let Some(r) = runs_per_point {
                cfg.sensitivity.runs_per_point = r;
            }
            commands::sensitivity(cfg, &ov)
        }
        Cmd::Synth => commands::synth(cfg, &ov),
        Cmd::ValidateDataset { path } => commands::validate_dataset(cfg, path.as_deref(), &ov),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
