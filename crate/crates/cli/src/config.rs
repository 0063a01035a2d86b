//! Run configuration: defaults, then a `key = value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use threadgraph::config::KvConfig;
use threadgraph::dynamics::{BinMethod, DeltaM, SpeedUnit};
use threadgraph::generator::{GeneratorParams, PRESETS};
use threadgraph::metrics::{MetricMode, MAX_EXACT_VERTICES};
use threadgraph::stats::DegreeKind;
use threadgraph::{FormatProfile, VotePolicy};

use crate::error::{CliError, Result};

/// Environment variable naming the output directory when no flag does.
pub const OUT_ENV: &str = "THREADGRAPH_OUT";
pub const DEFAULT_OUT: &str = "threadgraph-out";

/// Generator pseudo-preset producing the coupled corpus.
pub const COUPLED: &str = "coupled";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyzeMode {
    /// Exact up to the vertex cap, landmark above it.
    Auto,
    Fixed(MetricMode),
}

impl AnalyzeMode {
    pub fn resolve(self, vertices: usize, cap: usize) -> MetricMode {
        match self {
            AnalyzeMode::Auto if vertices <= cap => MetricMode::Exact,
            AnalyzeMode::Auto => MetricMode::Landmark,
            AnalyzeMode::Fixed(m) => m,
        }
    }
}

impl fmt::Display for AnalyzeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyzeMode::Auto => f.write_str("auto"),
            AnalyzeMode::Fixed(m) => m.fmt(f),
        }
    }
}

impl FromStr for AnalyzeMode {
    type Err = threadgraph::Error;

    fn from_str(s: &str) -> threadgraph::Result<Self> {
        match s {
            "auto" => Ok(AnalyzeMode::Auto),
            _ => s.parse().map(AnalyzeMode::Fixed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    /// A built-in profile name or the path of a profile config file.
    pub profile: String,
    pub presets: Vec<String>,
    pub count: usize,
    pub stride: usize,
    pub mode: AnalyzeMode,
    pub vertex_cap: usize,
    pub landmarks: usize,
    pub delta_m: Vec<DeltaM>,
    pub bins: usize,
    pub bin_method: BinMethod,
    pub speed_unit: SpeedUnit,
    pub degree: DegreeKind,
    pub depth_one_only: bool,
    /// Count only votes cast within 18 hours of the post.
    pub verdict_window: bool,
    pub rewire: Vec<f64>,
    pub seed: u64,
    pub out: PathBuf,
    /// `gen.*` overrides applied to every preset.
    pub generator: KvConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            profile: "canonical".into(),
            presets: vec!["aita-like".into()],
            count: 50,
            stride: 1,
            mode: AnalyzeMode::Auto,
            vertex_cap: 8192,
            landmarks: 64,
            delta_m: vec![DeltaM::ONE, DeltaM::TEN, DeltaM::SIXTY],
            bins: 10,
            bin_method: BinMethod::EqualWidth,
            speed_unit: SpeedUnit::Edges,
            degree: DegreeKind::Total,
            depth_one_only: false,
            verdict_window: false,
            rewire: vec![0.2, 0.5, 0.9],
            seed: 0,
            out: PathBuf::from(DEFAULT_OUT),
            generator: KvConfig::new(),
        }
    }
}

impl RunConfig {
    /// Defaults overridden by the entries of a config file.
    pub fn from_kv(cfg: &KvConfig) -> Result<Self> {
        let mut c = RunConfig::default();
        macro_rules! take {
            ($key:literal, $field:ident) => {
                if let Some(v) = cfg.parsed($key)? {
                    c.$field = v;
                }
            };
        }
        macro_rules! take_list {
            ($key:literal, $field:ident) => {
                if let Some(v) = cfg.list($key)? {
                    c.$field = v;
                }
            };
        }
        take_list!("input", inputs);
        take!("profile", profile);
        take_list!("presets", presets);
        take!("count", count);
        take!("stride", stride);
        take!("mode", mode);
        take!("vertex_cap", vertex_cap);
        take!("landmarks", landmarks);
        take_list!("delta_m", delta_m);
        take!("bins", bins);
        take!("bin_method", bin_method);
        take!("speed_unit", speed_unit);
        take!("degree", degree);
        take_list!("rewire", rewire);
        take!("seed", seed);
        take!("out", out);
        if let Some(b) = cfg.bool("depth_one_only")? {
            c.depth_one_only = b;
        }
        if let Some(b) = cfg.bool("verdict_window")? {
            c.verdict_window = b;
        }
        const KNOWN: [&str; 18] = [
            "input",
            "profile",
            "presets",
            "count",
            "stride",
            "mode",
            "vertex_cap",
            "landmarks",
            "delta_m",
            "bins",
            "bin_method",
            "speed_unit",
            "degree",
            "rewire",
            "seed",
            "out",
            "depth_one_only",
            "verdict_window",
        ];
        for key in cfg.keys() {
            if let Some(g) = key.strip_prefix("gen.") {
                c.generator
                    .set(format!("gen.{g}"), cfg.get(key).unwrap_or_default());
            } else if !KNOWN.contains(&key) {
                return Err(CliError::Usage(format!("unknown config key {key:?}")));
            }
        }
        Ok(c)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let cfg = KvConfig::from_path(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_kv(&cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Usage(msg));
        if self.stride == 0 {
            return bad("stride must be at least 1".into());
        }
        if self.vertex_cap == 0 || self.vertex_cap > MAX_EXACT_VERTICES {
            return bad(format!(
                "vertex_cap must lie in 1..={MAX_EXACT_VERTICES}, got {}",
                self.vertex_cap
            ));
        }
        if self.landmarks == 0 {
            return bad("landmarks must be at least 1".into());
        }
        if self.delta_m.is_empty() {
            return bad("delta_m needs at least one value".into());
        }
        if self.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        if let Some(f) = self.rewire.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return bad(format!("rewiring fractions must lie in (0, 1], got {f}"));
        }
        self.format_profile()?;
        for p in &self.presets {
            if p != COUPLED && !PRESETS.contains(&p.as_str()) {
                return bad(format!(
                    "unknown preset {p:?} (known: {}, {COUPLED})",
                    PRESETS.join(", ")
                ));
            }
        }
        self.generator_params()?;
        Ok(())
    }

    pub fn format_profile(&self) -> Result<FormatProfile> {
        if let Some(p) = FormatProfile::builtin(&self.profile) {
            return Ok(p);
        }
        let path = Path::new(&self.profile);
        if path.is_file() {
            let cfg = KvConfig::from_path(path)?;
            return Ok(FormatProfile::from_config(&cfg)?);
        }
        Err(CliError::Usage(format!(
            "profile {:?} is neither canonical, praw, pushshift nor a profile file",
            self.profile
        )))
    }

    /// Params per preset with the `gen.*` overrides applied. The coupled
    /// pseudo-preset expands to `count` entries, one thread each.
    pub fn generator_params(&self) -> Result<Vec<(GeneratorParams, usize)>> {
        self.presets
            .iter()
            .map(|name| {
                if name == COUPLED {
                    threadgraph::generator::coupled_params(self.count)
                        .into_iter()
                        .map(|p| Ok((p.apply_config(&self.generator)?, 1)))
                        .collect::<Result<Vec<_>>>()
                } else {
                    let p = GeneratorParams::preset(name)?.apply_config(&self.generator)?;
                    Ok(vec![(p, self.count)])
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().flatten().collect())
    }

    pub fn vote_policy(&self) -> VotePolicy {
        VotePolicy {
            depth_one_only: self.depth_one_only,
            window_secs: self
                .verdict_window
                .then_some(VotePolicy::VERDICT_WINDOW_SECS),
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// The provenance copy. The output directory is left out since the file
/// lives inside it.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inputs: Vec<String> = self
            .inputs
            .iter()
            .map(|p| p.display().to_string())
            .collect();
        writeln!(f, "input = {}", join(&inputs))?;
        writeln!(f, "profile = {}", self.profile)?;
        writeln!(f, "presets = {}", join(&self.presets))?;
        writeln!(f, "count = {}", self.count)?;
        writeln!(f, "stride = {}", self.stride)?;
        writeln!(f, "mode = {}", self.mode)?;
        writeln!(f, "vertex_cap = {}", self.vertex_cap)?;
        writeln!(f, "landmarks = {}", self.landmarks)?;
        writeln!(f, "delta_m = {}", join(&self.delta_m))?;
        writeln!(f, "bins = {}", self.bins)?;
        writeln!(f, "bin_method = {}", self.bin_method)?;
        writeln!(f, "speed_unit = {}", self.speed_unit)?;
        writeln!(f, "degree = {}", self.degree)?;
        writeln!(f, "depth_one_only = {}", self.depth_one_only)?;
        writeln!(f, "verdict_window = {}", self.verdict_window)?;
        writeln!(f, "rewire = {}", join(&self.rewire))?;
        writeln!(f, "seed = {}", self.seed)?;
        write!(f, "{}", self.generator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialized_copy_round_trips() {
        let mut c = RunConfig {
            stride: 7,
            presets: vec!["uniform".into(), COUPLED.into()],
            ..RunConfig::default()
        };
        c.generator.set("gen.p_root", 0.4);
        c.delta_m = vec![DeltaM::TEN];
        let text = c.to_string();
        let back = RunConfig::from_kv(&KvConfig::parse(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(
            RunConfig::from_kv(&KvConfig::parse("strid = 2").unwrap()),
            Err(CliError::Usage(_))
        ));
        let c = RunConfig::from_kv(&KvConfig::parse("stride = 0").unwrap()).unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig {
            presets: vec!["nope".into()],
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let c = RunConfig {
            rewire: vec![0.0],
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn auto_mode_switches_at_the_cap() {
        assert_eq!(AnalyzeMode::Auto.resolve(8192, 8192), MetricMode::Exact);
        assert_eq!(AnalyzeMode::Auto.resolve(8193, 8192), MetricMode::Landmark);
        assert_eq!(
            "landmark".parse::<AnalyzeMode>().unwrap(),
            AnalyzeMode::Fixed(MetricMode::Landmark)
        );
    }
}
