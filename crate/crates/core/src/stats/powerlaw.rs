//! Discrete power-law fits, `p(x) = x^-γ / ζ(γ, x_min)` for `x ≥ x_min`.

use std::fmt;
use std::str::FromStr;

use crate::graph::TemporalMultigraph;
use crate::{Error, Result};

/// Bernoulli numbers B2..B14 divided by their factorial index (2j)!.
const EM_COEFFS: [f64; 7] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
];

/// Hurwitz zeta `Σ_{k≥0} (q+k)^-s` for `s > 1`, `q > 0` (Euler–Maclaurin).
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0, "hurwitz_zeta needs s > 1 and q > 0");
    const N: usize = 12;
    let head: f64 = (0..N).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + N as f64;
    let mut tail = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // Rising factorial s(s+1)...(s+2j-2) times a^(-s-2j+1).
    let mut term = s * a.powf(-s - 1.0);
    for (j, c) in EM_COEFFS.iter().enumerate() {
        tail += c * term;
        let k = 2.0 * j as f64;
        term *= (s + k + 1.0) * (s + k + 2.0) / (a * a);
    }
    head + tail
}

/// Kolmogorov survival function `Q(λ) = P(K > λ)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Theta-function form; converges fast for small λ.
        let x = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=6)
            .map(|j| ((2 * j - 1) as f64).powi(2) * x)
            .map(f64::exp)
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|j| {
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (j * j) as f64 * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Largest gap between the empirical CDF of `sorted` and an integer CDF.
///
/// Both are step functions on the integers, so checking each distinct
/// sample value and its predecessor covers every gap.
pub fn ks_distance(sorted: &[u64], mut cdf: impl FnMut(u64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let below = i as f64 / n;
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let at = j as f64 / n;
        if v > 0 {
            d = d.max((below - cdf(v - 1)).abs());
        }
        d = d.max((at - cdf(v)).abs());
        i = j;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Use this `x_min` instead of selecting one.
    pub x_min: Option<u64>,
    /// Smallest tail a candidate `x_min` may leave.
    pub min_tail: usize,
    pub min_samples: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            x_min: None,
            min_tail: 10,
            min_samples: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub x_min: u64,
    pub ks: f64,
    pub p_value: f64,
    /// Samples at or above `x_min`.
    pub n_tail: usize,
    pub n: usize,
}

impl fmt::Display for PowerLawFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gamma = {}", self.gamma)?;
        writeln!(f, "xmin = {}", self.x_min)?;
        writeln!(f, "ks = {}", self.ks)?;
        writeln!(f, "p = {}", self.p_value)?;
        writeln!(f, "n_tail = {}", self.n_tail)?;
        writeln!(f, "n = {}", self.n)
    }
}

fn model_cdf(gamma: f64, x_min: u64) -> impl Fn(u64) -> f64 {
    let z = hurwitz_zeta(gamma, x_min as f64);
    move |x| {
        if x < x_min {
            0.0
        } else {
            1.0 - hurwitz_zeta(gamma, (x + 1) as f64) / z
        }
    }
}

/// Minimises the (convex) negative log-likelihood over γ by golden section.
fn mle_gamma(n: usize, sum_ln: f64, x_min: u64) -> f64 {
    let nll = |g: f64| n as f64 * hurwitz_zeta(g, x_min as f64).ln() + g * sum_ln;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1.0 + 1e-6, 30.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (nll(c), nll(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = nll(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = nll(d);
        }
    }
    (a + b) / 2.0
}

/// Fits a discrete power law by maximum likelihood.
///
/// Unless fixed in `opts`, `x_min` is the candidate whose fit has the
/// smallest KS distance to its tail; candidates must leave `min_tail`
/// samples with at least two distinct values. The p-value is the
/// asymptotic one-sample KS value for the tail size.
pub fn fit_power_law(sample: &[u64], opts: &FitOptions) -> Result<PowerLawFit> {
    if sample.len() < opts.min_samples {
        return Err(Error::Insufficient(format!(
            "power-law fit needs at least {} samples, got {}",
            opts.min_samples,
            sample.len()
        )));
    }
    if sample.contains(&0) {
        return Err(Error::InvalidParams(
            "power-law samples must be positive".into(),
        ));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable();
    if sorted[0] == sorted[sorted.len() - 1] {
        return Err(Error::Degenerate(format!(
            "all {} samples equal {}",
            sorted.len(),
            sorted[0]
        )));
    }

    // suffix[i] = Σ ln x over sorted[i..].
    let mut suffix = vec![0.0; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        suffix[i] = suffix[i + 1] + (sorted[i] as f64).ln();
    }
    let last = sorted[sorted.len() - 1];
    let candidates: Vec<usize> = match opts.x_min {
        Some(x) => {
            let i = sorted.partition_point(|&v| v < x);
            if i == sorted.len() || sorted[i] == last {
                return Err(Error::Degenerate(format!(
                    "fewer than two distinct samples at or above x_min {x}"
                )));
            }
            vec![i]
        }
        None => (0..sorted.len())
            .filter(|&i| {
                (i == 0 || sorted[i - 1] != sorted[i])
                    && sorted.len() - i >= opts.min_tail
                    && sorted[i] != last
            })
            .collect(),
    };
    if candidates.is_empty() {
        return Err(Error::Insufficient(format!(
            "no x_min leaves {} samples with two distinct values",
            opts.min_tail
        )));
    }

    let mut best: Option<PowerLawFit> = None;
    for i in candidates {
        let tail = &sorted[i..];
        let x_min = opts.x_min.unwrap_or(sorted[i]);
        let gamma = mle_gamma(tail.len(), suffix[i], x_min);
        let ks = ks_distance(tail, model_cdf(gamma, x_min));
        if best.is_none_or(|b| ks < b.ks) {
            let m = tail.len() as f64;
            let lambda = (m.sqrt() + 0.12 + 0.11 / m.sqrt()) * ks;
            best = Some(PowerLawFit {
                gamma,
                x_min,
                ks,
                p_value: kolmogorov_q(lambda),
                n_tail: tail.len(),
                n: sorted.len(),
            });
        }
    }
    Ok(best.expect("at least one candidate"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeKind {
    #[default]
    Total,
    In,
    Out,
}

impl fmt::Display for DegreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeKind::Total => "total",
            DegreeKind::In => "in",
            DegreeKind::Out => "out",
        })
    }
}

impl FromStr for DegreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(DegreeKind::Total),
            "in" => Ok(DegreeKind::In),
            "out" => Ok(DegreeKind::Out),
            _ => Err(Error::Config(format!("unknown degree kind {s:?}"))),
        }
    }
}

/// Positive degrees on the simple directed projection, by vertex id.
pub fn degree_sample(g: &TemporalMultigraph, kind: DegreeKind) -> Vec<u64> {
    let mut deg = vec![0u64; g.vertex_count()];
    for (a, b) in g.simple_directed() {
        if kind != DegreeKind::In {
            deg[a] += 1;
        }
        if kind != DegreeKind::Out {
            deg[b] += 1;
        }
    }
    deg.retain(|&d| d > 0);
    deg
}
