//! `fh`: batch runs over Fisher–Hartwig determinants, their asymptotics,
//! the σ-form Painlevé V transcendent, Haar Monte Carlo and truncated GMC.
//!
//! Exit codes: 0 ok, 2 config/spec parse failure, 3 numeric failure,
//! 4 Painlevé solver failure.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use commands::{CliError, Output, Overrides};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fh", version, about = "Fisher-Hartwig determinants, sigma-PV and GMC batch runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Primary output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Summary output file; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(clap::Args)]
struct Sampling {
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the sample (replicate) count in the config.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Toeplitz and Toeplitz+Hankel determinants.
    Det(Common),
    /// Exact log-determinants against an asymptotic formula.
    Compare(Common),
    /// Haar Monte Carlo estimators with deterministic references.
    Mc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Tabulate σ, σ′, I(x) and the connection-relation defect.
    Painleve(Common),
    /// Cell masses of the truncated chaos measure.
    Gmc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
}

fn config_hash(text: &str, ov: Overrides) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    h.update(format!("\0seed={:?};samples={:?}", ov.seed, ov.samples).as_bytes());
    format!("{:x}", h.finalize())[..16].to_string()
}

fn write(path: &Option<PathBuf>, text: &str, to_stderr: bool) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None if to_stderr => {
            eprint!("{text}");
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, ov) = match &cli.command {
        Command::Det(c) | Command::Compare(c) | Command::Painleve(c) => (c, Overrides::default()),
        Command::Mc { common, sampling } | Command::Gmc { common, sampling } => {
            (common, Overrides { seed: sampling.seed, samples: sampling.samples })
        }
    };
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| CliError::Parse(format!("{}: {e}", common.config.display())))?;
    let cfg = config::parse(&text).map_err(CliError::Parse)?;
    let hash = config_hash(&text, ov);
    let Output { primary, summary } = match &cli.command {
        Command::Det(_) => commands::cmd_det(&cfg, &hash)?,
        Command::Compare(_) => commands::cmd_compare(&cfg, &hash)?,
        Command::Mc { .. } => commands::cmd_mc(&cfg, &hash, ov)?,
        Command::Painleve(_) => commands::cmd_painleve(&cfg, &hash)?,
        Command::Gmc { .. } => commands::cmd_gmc(&cfg, &hash, ov)?,
    };
    write(&common.output, &primary, false)?;
    if let Some(s) = summary {
        write(&common.summary, &s, true)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
