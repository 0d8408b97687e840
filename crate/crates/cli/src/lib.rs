//! Experiment runner for the `kgz-core` laboratory.
//!
//! Each invocation runs one command from a key-value config file and writes
//! `manifest.json`, `results.jsonl` and `summary.csv` (plus command-specific
//! files) into the output directory. Exit status: 0 when every check passes,
//! 1 when a checker reports a violation, 2 on config or runtime errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{execute, Command, Outcome};
pub use config::RawConfig;
pub use error::{CliError, Status};
use output::Manifest;

#[derive(Debug, Parser)]
#[command(name = "kgz-lab", version, about = "Fourier restriction norm laboratory")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Key-value config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `seed` from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "kgz-out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Runs a parsed invocation and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("config error: --jobs must be positive");
            return finish(cli, None, Status::Error, "--jobs must be positive".into(), Vec::new());
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let outcome = std::fs::read_to_string(&cli.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", cli.config.display())))
        .and_then(|text| RawConfig::parse(&text, cli.seed))
        .and_then(|raw| execute(cli.command, &raw));
    match outcome {
        Ok(o) => match o.artifacts.write(&cli.out) {
            Ok(files) => {
                println!("{}: {} ({})", cli.command.name(), o.status.name(), o.message);
                finish(cli, Some(&o), o.status, o.message.clone(), files)
            }
            Err(e) => {
                eprintln!("{e}");
                finish(cli, Some(&o), Status::Error, e.to_string(), Vec::new())
            }
        },
        Err(e) => {
            eprintln!("{e}");
            finish(cli, None, Status::Error, e.to_string(), Vec::new())
        }
    }
}

fn finish(cli: &Cli, outcome: Option<&Outcome>, status: Status, message: String, files: Vec<String>) -> i32 {
    let manifest = Manifest {
        command: cli.command.name(),
        config: outcome.map(|o| o.config.clone()),
        config_hash: outcome.map(|o| o.config_hash.clone()),
        status,
        message: Some(message),
        files,
    };
    if let Err(e) = manifest.write(&cli.out) {
        eprintln!("cannot write manifest: {e}");
        return Status::Error.code();
    }
    status.code()
}
