//! Subcommand implementations. Each writes `run_config.txt` and a manifest.

mod analyze;
mod compare;
mod generate;
mod ingest;

pub use analyze::{analyze, AnalyzeSummary};
pub use compare::{compare, print_table, CompareRow};
pub use generate::generate;
pub use ingest::ingest;

use crate::config::RunConfig;
use crate::error::Result;
use crate::output::OutputDir;

pub const RUN_CONFIG: &str = "run_config.txt";

fn open_output(cfg: &RunConfig) -> Result<OutputDir> {
    let mut out = OutputDir::create(&cfg.out)?;
    out.write_bytes(RUN_CONFIG, cfg.to_string().as_bytes())?;
    Ok(out)
}

/// Renders an optional value, empty when absent.
pub(crate) fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
