//! The `threadgraph` command-line pipeline: ingest dumps, generate synthetic
//! corpora, analyze a store and compare stores.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod store;

use args::{Cli, Command};
pub use config::RunConfig;
pub use error::{CliError, Result};

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.command.args().resolve()?;
    match &cli.command {
        Command::Ingest(_) => {
            let report = commands::ingest(&cfg)?;
            eprintln!(
                "{} threads written to {}",
                report.threads_kept,
                cfg.out.display()
            );
        }
        Command::Generate(_) => {
            let n = commands::generate(&cfg)?;
            eprintln!("{n} threads written to {}", cfg.out.display());
        }
        Command::Analyze(_) => {
            let s = commands::analyze(&cfg)?;
            eprintln!(
                "{} threads analyzed, {} failed, {} files in {}",
                s.threads,
                s.failed,
                s.files,
                cfg.out.display()
            );
        }
        Command::Compare(_) => {
            let rows = commands::compare(&cfg)?;
            commands::print_table(cfg.delta_m[0], &rows);
        }
    }
    Ok(())
}
