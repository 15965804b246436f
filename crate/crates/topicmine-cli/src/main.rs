//! Command-line driver for the text-mining pipeline: ingest abstract
//! records, pick a topic count by coherence, train a topic model, and emit
//! distance matrices, the topic co-occurrence network, and annual trends.
//!
//! Exit codes: 0 success, 2 I/O failure, 3 invalid data or configuration,
//! 64 command-line usage error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::{ConfigFile, Overrides, PipelineConfig};

const EXIT_IO: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "topicmine",
    version,
    propagate_version = true,
    about = "Topic mining over patent/article abstracts: preprocessing, LDA, \
             coherence-guided model selection, topic networks, and annual trends"
)]
struct Cli {
    /// Key=value configuration file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for parallel sections (default: all cores). Outputs
    /// are identical for any thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load records, tokenize and filter them, and write a corpus bundle.
    Ingest(Overrides),
    /// Train across a range of topic counts and recommend one by coherence.
    Sweep(Overrides),
    /// Train at a fixed topic count and emit the full artifact set.
    Analyze(Overrides),
    /// Re-emit analysis artifacts from a saved model without retraining.
    Export(Overrides),
    /// Ingest, sweep, and analyze in one pass with the recommended count.
    RunAll(Overrides),
}

fn main() -> ExitCode {
    ExitCode::from(run())
}

fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };

    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_VALIDATION;
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} worker threads: {err}");
            return EXIT_VALIDATION;
        }
    }

    match dispatch(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_io() {
                EXIT_IO
            } else {
                EXIT_VALIDATION
            }
        }
    }
}

fn dispatch(cli: &Cli) -> topicmine::Result<()> {
    let file = match &cli.config {
        Some(path) => Some(ConfigFile::load(path)?),
        None => None,
    };
    let (flags, command): (&Overrides, fn(&PipelineConfig) -> topicmine::Result<()>) =
        match &cli.command {
            Command::Ingest(flags) => (flags, commands::cmd_ingest),
            Command::Sweep(flags) => (flags, commands::cmd_sweep),
            Command::Analyze(flags) => (flags, commands::cmd_analyze),
            Command::Export(flags) => (flags, commands::cmd_export),
            Command::RunAll(flags) => (flags, commands::cmd_run_all),
        };
    let config = PipelineConfig::resolve(file.as_ref(), flags)?;
    command(&config)
}
