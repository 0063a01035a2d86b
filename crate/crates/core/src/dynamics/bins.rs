use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::speed::{DeltaM, SpeedProfile, ThreadSpeeds};
use crate::metrics::opt;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinMethod {
    /// Equal-width duration ranges.
    #[default]
    EqualWidth,
    /// Equal thread counts.
    Quantile,
}

impl fmt::Display for BinMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinMethod::EqualWidth => "equal-width",
            BinMethod::Quantile => "quantile",
        })
    }
}

impl FromStr for BinMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal-width" | "width" => Ok(BinMethod::EqualWidth),
            "quantile" => Ok(BinMethod::Quantile),
            _ => Err(Error::Config(format!("unknown bin method {s:?}"))),
        }
    }
}

/// Linear-interpolation quantile of sorted data (type 7).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `Q3 + 1.5 * IQR`.
pub fn tukey_upper_fence(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let (q1, q3) = (quantile(&v, 0.25), quantile(&v, 0.75));
    q3 + 1.5 * (q3 - q1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationBin {
    pub index: usize,
    /// Duration range in seconds, `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
    pub thread_ids: Vec<String>,
    /// Absent for an empty bin.
    pub mean_star: Option<f64>,
    pub mean_periphery: Option<f64>,
    /// Absent for an empty bin or a zero periphery mean.
    pub ratio: Option<f64>,
    /// Per-interval mean over the threads that reach that interval.
    pub star_profile: Vec<f64>,
    pub periphery_profile: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationBins {
    pub delta_m: DeltaM,
    pub fence_secs: f64,
    /// Threads dropped as extremely long.
    pub removed: Vec<String>,
    pub bins: Vec<DurationBin>,
}

fn average_profiles<'a>(profiles: impl Iterator<Item = &'a SpeedProfile>) -> Vec<f64> {
    let (mut sum, mut n): (Vec<f64>, Vec<u32>) = (Vec::new(), Vec::new());
    for p in profiles {
        if p.len() > sum.len() {
            sum.resize(p.len(), 0.0);
            n.resize(p.len(), 0);
        }
        for (i, s) in p.speeds().enumerate() {
            sum[i] += s;
            n[i] += 1;
        }
    }
    sum.iter().zip(&n).map(|(s, &k)| s / k as f64).collect()
}

/// Removes extremely long threads, groups the rest by duration and averages
/// speeds per group.
///
/// All inputs must share one `Δm`. Fails when fewer threads than bins remain.
pub fn bin_and_average(
    threads: &[ThreadSpeeds],
    n_bins: usize,
    method: BinMethod,
) -> Result<DurationBins> {
    if n_bins == 0 {
        return Err(Error::InvalidParams("bin count must be positive".into()));
    }
    let Some(first) = threads.first() else {
        return Err(Error::Insufficient(format!(
            "no threads to bin; lower `bins` (currently {n_bins}) or add data"
        )));
    };
    let delta_m = first.delta_m;
    if threads.iter().any(|t| t.delta_m != delta_m) {
        return Err(Error::InvalidParams(
            "profiles with different intervals cannot be binned together".into(),
        ));
    }

    let durations: Vec<f64> = threads.iter().map(|t| t.duration_secs as f64).collect();
    let fence = tukey_upper_fence(&durations);
    let (kept, removed): (Vec<&ThreadSpeeds>, Vec<&ThreadSpeeds>) = threads
        .iter()
        .partition(|t| t.duration_secs as f64 <= fence);
    if kept.len() < n_bins {
        return Err(Error::Insufficient(format!(
            "{} threads remain after removing long outliers, fewer than {n_bins} bins; lower `bins` in the config",
            kept.len()
        )));
    }

    let lo = kept.iter().map(|t| t.duration_secs).min().unwrap_or(0) as f64;
    let hi = kept.iter().map(|t| t.duration_secs).max().unwrap_or(0) as f64;
    let mut members: Vec<Vec<&ThreadSpeeds>> = vec![Vec::new(); n_bins];
    let mut edges: Vec<(f64, f64)> = Vec::with_capacity(n_bins);
    match method {
        BinMethod::EqualWidth => {
            let width = (hi - lo) / n_bins as f64;
            for t in &kept {
                let i = if width > 0.0 {
                    ((t.duration_secs as f64 - lo) / width).floor() as usize
                } else {
                    0
                };
                members[i.min(n_bins - 1)].push(t);
            }
            edges.extend((0..n_bins).map(|i| {
                (
                    lo + width * i as f64,
                    if i + 1 == n_bins {
                        hi
                    } else {
                        lo + width * (i + 1) as f64
                    },
                )
            }));
        }
        BinMethod::Quantile => {
            let mut sorted = kept.clone();
            sorted.sort_by(|a, b| {
                (a.duration_secs, &a.thread_id).cmp(&(b.duration_secs, &b.thread_id))
            });
            let n = sorted.len();
            for (rank, t) in sorted.into_iter().enumerate() {
                members[rank * n_bins / n].push(t);
            }
            for m in &members {
                let d = m.iter().map(|t| t.duration_secs as f64);
                edges.push((
                    d.clone().fold(f64::INFINITY, f64::min),
                    d.fold(f64::NEG_INFINITY, f64::max),
                ));
            }
        }
    }

    let bins = members
        .into_iter()
        .zip(edges)
        .enumerate()
        .map(|(index, (m, (lo, hi)))| {
            let mean = |f: fn(&ThreadSpeeds) -> f64| {
                (!m.is_empty()).then(|| m.iter().map(|t| f(t)).sum::<f64>() / m.len() as f64)
            };
            let mean_star = mean(|t| t.star.mean_speed());
            let mean_periphery = mean(|t| t.periphery.mean_speed());
            let ratio = match (mean_star, mean_periphery) {
                (Some(s), Some(p)) if p > 0.0 => Some(s / p),
                _ => None,
            };
            DurationBin {
                index,
                lo,
                hi,
                thread_ids: m.iter().map(|t| t.thread_id.clone()).collect(),
                mean_star,
                mean_periphery,
                ratio,
                star_profile: average_profiles(m.iter().map(|t| &t.star)),
                periphery_profile: average_profiles(m.iter().map(|t| &t.periphery)),
            }
        })
        .collect();

    Ok(DurationBins {
        delta_m,
        fence_secs: fence,
        removed: removed.iter().map(|t| t.thread_id.clone()).collect(),
        bins,
    })
}

impl DurationBins {
    /// `bin,subgraph,delta_m,interval_index,speed` rows of the averaged profiles.
    pub fn write_profiles_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "bin,subgraph,delta_m,interval_index,speed")?;
        for b in &self.bins {
            for (tag, p) in [
                ("star", &b.star_profile),
                ("periphery", &b.periphery_profile),
            ] {
                for (i, s) in p.iter().enumerate() {
                    writeln!(w, "{},{tag},{},{i},{s}", b.index, self.delta_m)?;
                }
            }
        }
        Ok(())
    }

    /// One row per bin with the mean speeds and their ratio.
    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "bin,delta_m,lo_secs,hi_secs,threads,mean_star,mean_periphery,ratio"
        )?;
        for b in &self.bins {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                b.index,
                self.delta_m,
                b.lo,
                b.hi,
                b.thread_ids.len(),
                opt(b.mean_star),
                opt(b.mean_periphery),
                opt(b.ratio)
            )?;
        }
        Ok(())
    }

    pub fn ratios(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.bins.iter().map(|b| b.ratio)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::speed::{growth_speed, ThreadSpeeds};
    use crate::graph::SubgraphTag;

    fn fake(id: &str, star: &[i64], periphery: &[i64], duration: i64) -> ThreadSpeeds {
        let span = Some((0, duration));
        let tag = |t, p: SpeedProfile| SpeedProfile { tag: Some(t), ..p };
        ThreadSpeeds {
            thread_id: id.into(),
            delta_m: DeltaM::ONE,
            duration_secs: duration,
            star: tag(SubgraphTag::Star, growth_speed(star, DeltaM::ONE, span)),
            periphery: tag(
                SubgraphTag::Periphery,
                growth_speed(periphery, DeltaM::ONE, span),
            ),
            whole: growth_speed(&[star, periphery].concat(), DeltaM::ONE, span),
        }
    }

    #[test]
    fn type7_quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 0.75), 3.25);
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(tukey_upper_fence(&v), 3.25 + 1.5 * 1.5);
    }

    #[test]
    fn identical_threads_share_one_bin() {
        let threads: Vec<ThreadSpeeds> = (0..12)
            .map(|i| fake(&format!("t{i}"), &[0, 30, 90], &[100], 179))
            .collect();
        let bins = bin_and_average(&threads, 10, BinMethod::EqualWidth).unwrap();
        assert_eq!(bins.bins.len(), 10);
        assert_eq!(bins.bins[0].thread_ids.len(), 12);
        assert!(bins.bins[1..]
            .iter()
            .all(|b| b.mean_star.is_none() && b.ratio.is_none()));
        // 3 star edges over 3 one-minute intervals, 1 periphery edge.
        assert_eq!(bins.bins[0].mean_star, Some(1.0));
        assert_eq!(bins.bins[0].ratio, Some(3.0));
        assert_eq!(bins.bins[0].star_profile, vec![2.0, 1.0, 0.0]);
    }

    #[test]
    fn long_outliers_are_removed() {
        let mut threads: Vec<ThreadSpeeds> = (0..20)
            .map(|i| fake(&format!("t{i:02}"), &[0], &[60], 60 * (i + 1)))
            .collect();
        threads.push(fake("huge", &[0], &[60], 1_000_000));
        let bins = bin_and_average(&threads, 10, BinMethod::EqualWidth).unwrap();
        assert_eq!(bins.removed, vec!["huge".to_string()]);
        let sizes: Vec<usize> = bins.bins.iter().map(|b| b.thread_ids.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 20);
        assert!(sizes.iter().all(|&s| s == 2));
        let q = bin_and_average(&threads, 4, BinMethod::Quantile).unwrap();
        assert!(q.bins.iter().all(|b| b.thread_ids.len() == 5));
    }

    #[test]
    fn too_few_threads_is_an_error() {
        let threads: Vec<ThreadSpeeds> = (0..5)
            .map(|i| fake(&format!("t{i}"), &[0], &[1], 10))
            .collect();
        let err = bin_and_average(&threads, 10, BinMethod::EqualWidth).unwrap_err();
        assert!(err.to_string().contains("bins"));
        assert!(bin_and_average(&threads, 5, BinMethod::EqualWidth).is_ok());
    }
}
