use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rdlab::commands::{self, Context};
use rdlab::config::RunConfig;
use rdlab::{LabError, Result};

#[derive(Debug, Parser)]
#[command(name = "rdlab", version, about = "Threshold phenomena in 1D reaction-diffusion equations")]
struct Cli {
    /// Dotted-key configuration file; defaults apply to every missing key.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for parameter sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Reserved; recorded in manifests. All runs are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one initial datum and classify its long-time behavior.
    Simulate,
    /// Compute the bump (ground state) profile.
    Bump,
    /// Compute the traveling front and its speed.
    Front,
    /// Principal eigenvalue of the linearization at the bump.
    Spectral,
    /// Classify a trajectory CSV written by `simulate`.
    Classify {
        /// Trajectory CSV (overrides `classify.input`).
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Locate the sharp threshold of a monotone family.
    Threshold,
    /// Render SVG charts from CSV artifacts.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<Vec<String>> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out = cli.out.clone().or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("rdlab-out"));
    let ctx = Context { out, workers: cli.workers, seed: cli.seed };
    let summary = match cli.command {
        Command::Simulate => commands::simulate(&cfg, &ctx)?,
        Command::Bump => commands::bump(&cfg, &ctx)?,
        Command::Front => commands::front(&cfg, &ctx)?,
        Command::Spectral => commands::spectral(&cfg, &ctx)?,
        Command::Classify { input } => {
            let input = input
                .or_else(|| cfg.classify_input.clone())
                .ok_or_else(|| LabError::Usage("classify needs --input or classify.input".into()))?;
            commands::classify_csv(&cfg, &ctx, &input)?
        }
        Command::Threshold => commands::threshold(&cfg, &ctx)?,
        Command::Plot { inputs } => commands::plot(&inputs, &ctx, &cfg.hash())?,
    };
    let mut lines = summary.lines;
    lines.push(format!("wrote {} artifacts to {}", summary.manifest.artifacts.len() + 1, ctx.out.display()));
    Ok(lines)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
