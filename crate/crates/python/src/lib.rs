//! Python bindings: threads, their interaction graphs, and the statistics
//! applied to them.

use std::collections::BTreeSet;
use std::path::PathBuf;

use core_tg::config::KvConfig;
use core_tg::dynamics::{self, DeltaM, SpeedProfile, SpeedUnit};
use core_tg::ingest::{open_dump, serialize_thread};
use core_tg::metrics::{self, MetricMode, TraceConfig};
use core_tg::stats::{self, DegreeKind, FitOptions};
use core_tg::{FormatProfile, GeneratorParams, JudgmentLabel, ThreadRecord, VotePolicy};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: core_tg::Error) -> PyErr {
    match e {
        core_tg::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = core_tg::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn profile(name: &str) -> PyResult<FormatProfile> {
    FormatProfile::builtin(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown format profile {name:?}")))
}

fn policy(depth_one_only: bool, verdict_window: bool) -> VotePolicy {
    VotePolicy {
        depth_one_only,
        window_secs: verdict_window.then_some(VotePolicy::VERDICT_WINDOW_SECS),
    }
}

/// One conversation: the post and its comment tree.
#[pyclass(module = "threadgraph", frozen)]
struct Thread {
    inner: ThreadRecord,
}

#[pymethods]
impl Thread {
    #[getter]
    fn thread_id(&self) -> &str {
        &self.inner.thread_id
    }

    #[getter]
    fn n_comments(&self) -> usize {
        self.inner.comments.len()
    }

    #[getter]
    fn duration_secs(&self) -> i64 {
        self.inner.duration_secs()
    }

    /// Judgment label of every comment, in time order.
    fn labels(&self) -> Vec<&'static str> {
        self.inner
            .comments
            .iter()
            .map(|c| c.label.as_str())
            .collect()
    }

    /// Labels counted as votes under the given switches.
    #[pyo3(signature = (depth_one_only = false, verdict_window = false))]
    fn votes(&self, depth_one_only: bool, verdict_window: bool) -> Vec<&'static str> {
        self.inner
            .votes(&policy(depth_one_only, verdict_window))
            .into_iter()
            .map(JudgmentLabel::as_str)
            .collect()
    }

    /// Store-format serialization, one JSON record per line.
    fn to_jsonl(&self) -> String {
        serialize_thread(&self.inner)
    }

    fn graph(&self) -> Graph {
        Graph {
            inner: core_tg::TemporalMultigraph::from_thread(&self.inner),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.comments.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Thread({:?}, comments={})",
            self.inner.thread_id,
            self.inner.comments.len()
        )
    }
}

/// The directed temporal multigraph of user interactions in one thread.
#[pyclass(module = "threadgraph", frozen)]
struct Graph {
    inner: core_tg::TemporalMultigraph,
}

fn profile_dict<'py>(py: Python<'py>, p: &SpeedProfile) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("speeds", p.speeds().collect::<Vec<f64>>())?;
    d.set_item("total", p.total())?;
    d.set_item("mean_speed", p.mean_speed())?;
    Ok(d)
}

#[pymethods]
impl Graph {
    #[getter]
    fn thread_id(&self) -> &str {
        &self.inner.thread_id
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// Vertex names; index 0 is the post author.
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices.iter().map(|v| v.name.clone()).collect()
    }

    /// `(from, to, t, is_star, label)` per comment, in time order.
    fn edges(&self) -> Vec<(usize, usize, i64, bool, &'static str)> {
        self.inner
            .edges
            .iter()
            .map(|e| (e.from, e.to, e.t, e.is_star, e.label.as_str()))
            .collect()
    }

    /// Distinct directed pairs without self-loops.
    fn simple_edges(&self) -> Vec<(usize, usize)> {
        self.inner.simple_directed().into_iter().collect()
    }

    /// Metric samples along the edge-by-edge replay.
    #[pyo3(signature = (mode = "exact", stride = 1, vertex_cap = 8192, landmarks = 64, seed = 0))]
    fn trace<'py>(
        &self,
        py: Python<'py>,
        mode: &str,
        stride: usize,
        vertex_cap: usize,
        landmarks: usize,
        seed: u64,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let mode: MetricMode = parse(mode)?;
        let cfg = TraceConfig {
            stride,
            vertex_cap,
            landmarks,
            seed,
        };
        let tr = py
            .detach(|| metrics::trace(&self.inner, mode, &cfg))
            .map_err(err)?;
        tr.samples
            .iter()
            .map(|s| {
                let d = PyDict::new(py);
                d.set_item("k", s.k)?;
                d.set_item("t", s.t)?;
                d.set_item("n", s.n_vertices)?;
                d.set_item("m", s.n_edges)?;
                d.set_item("density", s.density)?;
                d.set_item("gcc", s.gcc)?;
                d.set_item("aspl", s.aspl)?;
                d.set_item("diameter", s.diameter)?;
                Ok(d)
            })
            .collect()
    }

    /// Growth speeds of the star, the periphery and the whole graph.
    #[pyo3(signature = (delta_m = 10, unit = "edges"))]
    fn speeds<'py>(
        &self,
        py: Python<'py>,
        delta_m: u32,
        unit: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let dm = DeltaM::new(delta_m).map_err(err)?;
        let unit: SpeedUnit = parse(unit)?;
        let s = dynamics::thread_speeds(&self.inner, dm, unit);
        let d = PyDict::new(py);
        d.set_item("delta_m", delta_m)?;
        d.set_item("duration_secs", s.duration_secs)?;
        d.set_item("star", profile_dict(py, &s.star)?)?;
        d.set_item("periphery", profile_dict(py, &s.periphery)?)?;
        d.set_item("whole", profile_dict(py, &s.whole)?)?;
        Ok(d)
    }

    /// The four star/periphery by voting/non-voting response-time cells.
    fn response_times<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        dynamics::response_times(&self.inner)
            .into_iter()
            .map(|c| {
                let d = PyDict::new(py);
                d.set_item("subgraph", c.tag.to_string())?;
                d.set_item("class", c.class.to_string())?;
                d.set_item("mean", c.mean)?;
                d.set_item("sigma", c.sigma)?;
                d.set_item("filtered_mean", c.filtered_mean)?;
                d.set_item("filtered_count", c.filtered_count)?;
                d.set_item("raw", c.raw)?;
                Ok(d)
            })
            .collect()
    }

    #[pyo3(signature = (kind = "total"))]
    fn degree_sample(&self, kind: &str) -> PyResult<Vec<u64>> {
        let kind: DegreeKind = parse(kind)?;
        Ok(stats::degree_sample(&self.inner, kind))
    }

    fn reciprocity(&self) -> f64 {
        stats::reciprocity(&self.inner.simple_directed())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({:?}, vertices={}, edges={})",
            self.inner.thread_id,
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// Names accepted by `generate`.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    core_tg::generator::PRESETS.to_vec()
}

fn params(preset: &str, overrides: Option<&Bound<'_, PyDict>>) -> PyResult<GeneratorParams> {
    let mut cfg = KvConfig::new();
    if let Some(o) = overrides {
        for (k, v) in o.iter() {
            let key: String = k.extract()?;
            let value = match v.extract::<Vec<f64>>() {
                Ok(list) => list
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(", "),
                Err(_) => v.str()?.to_string(),
            };
            cfg.set(format!("gen.{key}"), value);
        }
    }
    GeneratorParams::preset(preset)
        .and_then(|p| p.apply_config(&cfg))
        .map_err(err)
}

/// A seeded synthetic corpus; thread `i` uses seed `seed + i`.
#[pyfunction]
#[pyo3(signature = (preset = "aita-like", count = 1, seed = 0, overrides = None))]
fn generate(
    py: Python<'_>,
    preset: &str,
    count: usize,
    seed: u64,
    overrides: Option<&Bound<'_, PyDict>>,
) -> PyResult<Vec<Thread>> {
    let p = params(preset, overrides)?;
    let threads = py
        .detach(|| core_tg::generate_corpus(&[p], count, seed))
        .map_err(err)?;
    Ok(threads.into_iter().map(|inner| Thread { inner }).collect())
}

fn report_dict<'py>(py: Python<'py>, r: &core_tg::ParseReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("records_read", r.records_read)?;
    d.set_item("malformed_skipped", r.malformed_skipped)?;
    d.set_item("duplicates_removed", r.duplicates_removed)?;
    d.set_item("orphans_dropped", r.orphans_dropped)?;
    d.set_item("threads_rejected", r.threads_rejected)?;
    d.set_item("threads_dropped", r.threads_dropped)?;
    d.set_item("threads_kept", r.threads_kept)?;
    Ok(d)
}

/// Parses newline-delimited records held in a string.
#[pyfunction]
#[pyo3(signature = (text, profile = "canonical"))]
fn parse_dump<'py>(
    py: Python<'py>,
    text: &str,
    profile: &str,
) -> PyResult<(Vec<Thread>, Bound<'py, PyDict>)> {
    let p = self::profile(profile)?;
    let (threads, report) = core_tg::parse_dump(text.as_bytes(), &p).map_err(err)?;
    Ok((
        threads.into_iter().map(|inner| Thread { inner }).collect(),
        report_dict(py, &report)?,
    ))
}

/// Parses a dump file, gzip or plain.
#[pyfunction]
#[pyo3(signature = (path, profile = "canonical"))]
fn read_dump<'py>(
    py: Python<'py>,
    path: PathBuf,
    profile: &str,
) -> PyResult<(Vec<Thread>, Bound<'py, PyDict>)> {
    let p = self::profile(profile)?;
    let (threads, report) = py
        .detach(|| open_dump(&path).and_then(|r| core_tg::parse_dump(r, &p)))
        .map_err(err)?;
    Ok((
        threads.into_iter().map(|inner| Thread { inner }).collect(),
        report_dict(py, &report)?,
    ))
}

/// The judgment label of a comment body.
#[pyfunction]
fn extract_judgment(body: &str) -> &'static str {
    core_tg::extract_judgment(body).as_str()
}

/// Entropy (bits) and band of a list of vote labels.
#[pyfunction]
fn disagreement_entropy<'py>(py: Python<'py>, labels: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let labels = labels
        .iter()
        .map(|l| {
            l.parse::<JudgmentLabel>()
                .map_err(|e| PyValueError::new_err(e.to_string()))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let r = stats::disagreement_entropy(labels);
    let d = PyDict::new(py);
    let counts: Vec<(&str, u64)> = JudgmentLabel::VOTING
        .iter()
        .map(|l| l.as_str())
        .zip(r.counts)
        .collect();
    d.set_item("counts", counts)?;
    d.set_item("entropy", r.entropy)?;
    d.set_item("band", r.band.map(|b| b.to_string()))?;
    Ok(d)
}

/// Discrete power-law fit with KS validation.
#[pyfunction]
#[pyo3(signature = (sample, x_min = None, min_tail = 10, min_samples = 50))]
fn fit_power_law<'py>(
    py: Python<'py>,
    sample: Vec<u64>,
    x_min: Option<u64>,
    min_tail: usize,
    min_samples: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let f = stats::fit_power_law(
        &sample,
        &FitOptions {
            x_min,
            min_tail,
            min_samples,
        },
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("gamma", f.gamma)?;
    d.set_item("x_min", f.x_min)?;
    d.set_item("ks", f.ks)?;
    d.set_item("p_value", f.p_value)?;
    d.set_item("n_tail", f.n_tail)?;
    d.set_item("n", f.n)?;
    Ok(d)
}

/// Spearman rank correlation and its two-sided p-value; `None` for a constant series.
#[pyfunction]
fn spearman(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<(Option<f64>, Option<f64>)> {
    let c = stats::spearman(&xs, &ys).map_err(err)?;
    Ok((c.rho, c.p_value))
}

/// Two-sided Mann-Whitney test; returns `(u, z, p_value)`.
#[pyfunction]
fn rank_sum_test(a: Vec<f64>, b: Vec<f64>) -> PyResult<(f64, f64, f64)> {
    let t = stats::rank_sum_test(&a, &b).map_err(err)?;
    Ok((t.u, t.z, t.p_value))
}

/// Degree-preserving double-edge swaps over a simple directed edge list.
#[pyfunction]
#[pyo3(signature = (edges, fraction, seed = 0))]
fn rewire(edges: Vec<(usize, usize)>, fraction: f64, seed: u64) -> PyResult<Vec<(usize, usize)>> {
    let set: BTreeSet<(usize, usize)> = edges.into_iter().collect();
    Ok(stats::rewire(&set, fraction, seed)
        .map_err(err)?
        .edges
        .into_iter()
        .collect())
}

/// Share of directed edges whose reverse also exists.
#[pyfunction]
fn reciprocity(edges: Vec<(usize, usize)>) -> f64 {
    stats::reciprocity(&edges.into_iter().collect())
}

#[pymodule]
fn threadgraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Thread>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(parse_dump, m)?)?;
    m.add_function(wrap_pyfunction!(read_dump, m)?)?;
    m.add_function(wrap_pyfunction!(extract_judgment, m)?)?;
    m.add_function(wrap_pyfunction!(disagreement_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    m.add_function(wrap_pyfunction!(rank_sum_test, m)?)?;
    m.add_function(wrap_pyfunction!(rewire, m)?)?;
    m.add_function(wrap_pyfunction!(reciprocity, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
