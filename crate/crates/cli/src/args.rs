//! Command-line flags. Every flag overrides the matching config entry.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use threadgraph::config::KvConfig;
use threadgraph::dynamics::{BinMethod, DeltaM, SpeedUnit};
use threadgraph::stats::DegreeKind;

use crate::config::{AnalyzeMode, RunConfig, DEFAULT_OUT, OUT_ENV};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "threadgraph",
    version,
    about = "Growing-network analysis of threaded conversations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse newline-delimited dumps into a thread store.
    Ingest(RunArgs),
    /// Write a synthetic corpus in store format.
    Generate(RunArgs),
    /// Per-thread and corpus analyses of one store.
    Analyze(RunArgs),
    /// Star/periphery speed ratios per duration bin across stores.
    Compare(RunArgs),
}

impl Command {
    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Ingest(a)
            | Command::Generate(a)
            | Command::Analyze(a)
            | Command::Compare(a) => a,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Dump files (ingest) or store directories (analyze, compare).
    pub inputs: Vec<PathBuf>,
    /// Key-value config file; flags take precedence over it.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Output directory [env: THREADGRAPH_OUT]
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Input format: canonical, praw, pushshift or a profile file.
    #[arg(long)]
    pub profile: Option<String>,
    /// Generator presets: aita-like, slow-voting, uniform, coupled.
    #[arg(long, value_delimiter = ',')]
    pub presets: Option<Vec<String>>,
    /// Threads per preset.
    #[arg(long)]
    pub count: Option<usize>,
    /// Generator parameter override, e.g. `--gen p_root=0.5`.
    #[arg(long = "gen", value_name = "KEY=VALUE")]
    pub generator: Vec<String>,
    #[arg(long)]
    pub stride: Option<usize>,
    /// auto, exact, landmark or oracle.
    #[arg(long)]
    pub mode: Option<AnalyzeMode>,
    #[arg(long)]
    pub vertex_cap: Option<usize>,
    #[arg(long)]
    pub landmarks: Option<usize>,
    /// Speed intervals in minutes.
    #[arg(long, value_delimiter = ',')]
    pub delta_m: Option<Vec<DeltaM>>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// equal-width or quantile.
    #[arg(long)]
    pub bin_method: Option<BinMethod>,
    /// edges or nodes.
    #[arg(long)]
    pub speed_unit: Option<SpeedUnit>,
    /// total, in or out.
    #[arg(long)]
    pub degree: Option<DegreeKind>,
    /// Count votes from first-level comments only.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub depth_one_only: Option<bool>,
    /// Count votes cast within 18 hours of the post only.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub verdict_window: Option<bool>,
    /// Rewiring fractions in (0, 1].
    #[arg(long, value_delimiter = ',')]
    pub rewire: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunArgs {
    /// Defaults, then the config file, then flags. The output directory comes
    /// from the flag, then the environment, then the config file.
    pub fn resolve(&self) -> Result<RunConfig> {
        let kv = match &self.config {
            Some(path) => KvConfig::from_path(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?,
            None => KvConfig::new(),
        };
        let mut c = RunConfig::from_kv(&kv)?;
        if !self.inputs.is_empty() {
            c.inputs = self.inputs.clone();
        }
        macro_rules! over {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$field = v.clone();
                }
            )*};
        }
        over!(
            profile,
            presets,
            count,
            stride,
            mode,
            vertex_cap,
            landmarks,
            delta_m,
            bins,
            bin_method,
            speed_unit,
            degree,
            depth_one_only,
            verdict_window,
            rewire,
            seed
        );
        for kv in &self.generator {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--gen expects KEY=VALUE, got {kv:?}")))?;
            let k = k.trim();
            let key = if k.starts_with("gen.") {
                k.to_string()
            } else {
                format!("gen.{k}")
            };
            c.generator.set(key, v.trim());
        }
        let env = std::env::var_os(OUT_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        c.out = self
            .out
            .clone()
            .or(env)
            .or_else(|| kv.contains("out").then(|| c.out.clone()))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        c.validate()?;
        Ok(c)
    }
}
