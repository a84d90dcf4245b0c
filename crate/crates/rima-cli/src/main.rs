use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rima_cli::commands::{cmd_oracle, cmd_run, cmd_sinr};

/// Link-level simulator for surface-indexed multiple access.
#[derive(Parser)]
#[command(name = "rima", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured BER sweep and write CSV curves plus a manifest.
    Run {
        /// TOML sweep configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads; omitted = all cores. Never changes the numbers.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Emit the analytic reference curves used to validate the harness.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Channel draws per SNR point for the semi-analytic curve.
        #[arg(long, default_value_t = 1_000_000)]
        draws: u64,
        /// Power split override; defaults to the first noma-family scheme.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Average the per-scheme weak-user SINR formulas over a channel ensemble.
    Sinr {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Realizations per SNR point.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out_dir,
            threads,
        } => cmd_run(&config, &out_dir, threads),
        Command::Oracle {
            config,
            out_dir,
            draws,
            mu,
        } => cmd_oracle(&config, &out_dir, draws, mu),
        Command::Sinr {
            config,
            out_dir,
            samples,
        } => cmd_sinr(&config, &out_dir, samples),
    };
    match result {
        Ok(files) => {
            for file in files {
                println!("{}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error[{}]: {err}", err.category());
            ExitCode::FAILURE
        }
    }
}
