//! Structural metrics of growing thread graphs.
//!
//! All four metrics use simple projections of the multigraph: density the
//! directed one, clustering and path lengths the undirected one. Path
//! lengths are restricted to the largest connected component (ties broken
//! towards the component with the smallest vertex id).

mod exact;
mod growth;
mod landmark;
pub mod oracle;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::graph::TemporalMultigraph;
use crate::{Error, Result};

pub use exact::{ExactEngine, MAX_EXACT_VERTICES};
pub use growth::{GrowingGraph, Growth};
pub use landmark::{Estimate, LandmarkEngine};

/// Integer quantities behind every metric; metrics are derived from these
/// with a single final division.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StructuralCounts {
    pub vertices: u64,
    pub directed_edges: u64,
    pub triangles: u64,
    /// Connected triplets, `sum_v C(deg v, 2)`.
    pub triplets: u64,
    pub lcc_size: u64,
    /// Sum of distances over unordered pairs in the largest component.
    pub lcc_distance_sum: u64,
    pub lcc_diameter: u32,
}

impl StructuralCounts {
    pub fn density(&self) -> Option<f64> {
        let n = self.vertices;
        (n >= 2).then(|| self.directed_edges as f64 / (n * (n - 1)) as f64)
    }

    pub fn gcc(&self) -> f64 {
        if self.triplets == 0 {
            0.0
        } else {
            (3 * self.triangles) as f64 / self.triplets as f64
        }
    }

    pub fn aspl(&self) -> Option<f64> {
        let n = self.lcc_size;
        (n >= 2).then(|| self.lcc_distance_sum as f64 / (n * (n - 1) / 2) as f64)
    }

    pub fn diameter(&self) -> Option<u32> {
        (self.lcc_size >= 2).then_some(self.lcc_diameter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricMode {
    /// Exact incremental maintenance of distances and triangle counters.
    Exact,
    /// Exact density and clustering, sampled path statistics.
    Landmark,
    /// Every snapshot recomputed from scratch.
    Oracle,
}

impl fmt::Display for MetricMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricMode::Exact => "exact",
            MetricMode::Landmark => "landmark",
            MetricMode::Oracle => "oracle",
        })
    }
}

impl FromStr for MetricMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-incremental" => Ok(MetricMode::Exact),
            "landmark" | "landmark-approx" => Ok(MetricMode::Landmark),
            "oracle" => Ok(MetricMode::Oracle),
            _ => Err(Error::Config(format!("unknown metric mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceConfig {
    pub stride: usize,
    /// Largest graph the exact engine accepts.
    pub vertex_cap: usize,
    /// Landmark sources per snapshot.
    pub landmarks: usize,
    pub seed: u64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            stride: 1,
            vertex_cap: 8192,
            landmarks: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub k: usize,
    pub t: i64,
    pub n_vertices: u64,
    pub n_edges: usize,
    pub density: Option<f64>,
    pub gcc: f64,
    pub aspl: Option<f64>,
    pub diameter: Option<u32>,
}

impl MetricSample {
    fn from_counts(k: usize, t: i64, c: &StructuralCounts) -> Self {
        MetricSample {
            k,
            t,
            n_vertices: c.vertices,
            n_edges: k,
            density: c.density(),
            gcc: c.gcc(),
            aspl: c.aspl(),
            diameter: c.diameter(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricTrace {
    pub thread_id: String,
    pub mode: MetricMode,
    pub samples: Vec<MetricSample>,
}

impl MetricTrace {
    pub fn last(&self) -> Option<&MetricSample> {
        self.samples.last()
    }

    /// CSV with header `k,t,n,m,density,gcc,aspl,diameter`; absent values are empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,t,n,m,density,gcc,aspl,diameter")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                s.k,
                s.t,
                s.n_vertices,
                s.n_edges,
                opt(s.density),
                s.gcc,
                opt(s.aspl),
                opt(s.diameter)
            )?;
        }
        Ok(())
    }
}

pub(crate) fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Replays `g` and records the four metrics at every emitted snapshot.
///
/// `Exact` refuses graphs above `cfg.vertex_cap`; callers should then switch
/// to `Landmark`.
pub fn trace(g: &TemporalMultigraph, mode: MetricMode, cfg: &TraceConfig) -> Result<MetricTrace> {
    if cfg.stride == 0 {
        return Err(Error::InvalidParams(
            "replay stride must be at least 1".into(),
        ));
    }
    let n = g.vertex_count();
    let total = g.edge_count();
    let emit = |k: usize| k.is_multiple_of(cfg.stride) || k == total;
    let mut samples = Vec::new();

    match mode {
        MetricMode::Exact => {
            let cap = cfg.vertex_cap.min(MAX_EXACT_VERTICES);
            if n > cap {
                return Err(Error::VertexCapExceeded { vertices: n, cap });
            }
            let mut engine = ExactEngine::new(n);
            engine.push_edge(g.root, g.root);
            for (i, e) in g.edges.iter().enumerate() {
                engine.push_edge(e.from, e.to);
                let k = i + 1;
                if emit(k) {
                    samples.push(MetricSample::from_counts(k, e.t, &engine.counts()));
                }
            }
        }
        MetricMode::Landmark => {
            let mut engine = LandmarkEngine::new(n, cfg.landmarks, cfg.seed);
            engine.push_edge(g.root, g.root);
            for (i, e) in g.edges.iter().enumerate() {
                engine.push_edge(e.from, e.to);
                let k = i + 1;
                if emit(k) {
                    let est = engine.estimate(k as u64);
                    let mut s = MetricSample::from_counts(k, e.t, &est.counts);
                    s.aspl = est.mean_path;
                    samples.push(s);
                }
            }
        }
        MetricMode::Oracle => {
            for snap in g.replay(cfg.stride) {
                let c = oracle::counts(&snap);
                samples.push(MetricSample::from_counts(
                    snap.k,
                    snap.t.unwrap_or_default(),
                    &c,
                ));
            }
        }
    }

    Ok(MetricTrace {
        thread_id: g.thread_id.clone(),
        mode,
        samples,
    })
}
