//! Per-thread features and their rank correlation with disagreement.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use super::entropy::disagreement_entropy;
use super::rank::spearman;
use super::reciprocity::reciprocity;
use super::rewire::rewire;
use crate::graph::TemporalMultigraph;
use crate::ingest::{JudgmentLabel, ThreadRecord, VotePolicy};
use crate::metrics::MetricSample;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    Aspl,
    Gcc,
    OneCommentUsers,
    Reciprocity,
    /// Reciprocity after rewiring this percentage of edges.
    RewiredReciprocity(u32),
    Comments,
    NonVoters,
    AvgWords,
    AvgScore,
    DurationSecs,
    CommentsPerMinute,
    Sentiment,
    UnsureVoters,
}

impl Feature {
    /// Report order, with one rewired-reciprocity row per fraction.
    pub fn all(rewire_percents: &[u32]) -> Vec<Feature> {
        let mut v = vec![
            Feature::Aspl,
            Feature::Gcc,
            Feature::OneCommentUsers,
            Feature::Reciprocity,
        ];
        v.extend(
            rewire_percents
                .iter()
                .map(|&p| Feature::RewiredReciprocity(p)),
        );
        v.extend([
            Feature::Comments,
            Feature::NonVoters,
            Feature::AvgWords,
            Feature::AvgScore,
            Feature::DurationSecs,
            Feature::CommentsPerMinute,
            Feature::Sentiment,
            Feature::UnsureVoters,
        ]);
        v
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Aspl => f.write_str("aspl"),
            Feature::Gcc => f.write_str("gcc"),
            Feature::OneCommentUsers => f.write_str("one_comment_users_pct"),
            Feature::Reciprocity => f.write_str("reciprocity"),
            Feature::RewiredReciprocity(p) => write!(f, "reciprocity_rand_{p}"),
            Feature::Comments => f.write_str("comments"),
            Feature::NonVoters => f.write_str("non_voters_pct"),
            Feature::AvgWords => f.write_str("avg_words"),
            Feature::AvgScore => f.write_str("avg_score"),
            Feature::DurationSecs => f.write_str("duration_secs"),
            Feature::CommentsPerMinute => f.write_str("comments_per_minute"),
            Feature::Sentiment => f.write_str("post_sentiment"),
            Feature::UnsureVoters => f.write_str("unsure_voters_pct"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreadFeatures {
    pub thread_id: String,
    pub entropy: Option<f64>,
    pub values: HashMap<Feature, Option<f64>>,
}

fn pct(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| 100.0 * part as f64 / whole as f64)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

impl ThreadFeatures {
    /// Features of one thread. `last` is the final metric sample of its
    /// trace (for ASPL and GCC); rewiring uses `seed` for every fraction.
    pub fn extract(
        record: &ThreadRecord,
        g: &TemporalMultigraph,
        last: Option<&MetricSample>,
        policy: &VotePolicy,
        rewire_fractions: &[f64],
        seed: u64,
    ) -> Result<ThreadFeatures> {
        let mut values = HashMap::new();
        values.insert(Feature::Aspl, last.and_then(|s| s.aspl));
        values.insert(Feature::Gcc, last.map(|s| s.gcc));

        let commenters: Vec<&[JudgmentLabel]> = g
            .vertices
            .iter()
            .map(|v| v.labels.as_slice())
            .filter(|l| !l.is_empty())
            .collect();
        let one = commenters.iter().filter(|l| l.len() == 1).count();
        values.insert(Feature::OneCommentUsers, pct(one, commenters.len()));
        let voters: Vec<&&[JudgmentLabel]> = commenters
            .iter()
            .filter(|l| l.iter().any(|x| x.is_voting_comment()))
            .collect();
        values.insert(
            Feature::NonVoters,
            pct(commenters.len() - voters.len(), commenters.len()),
        );
        let unsure = voters
            .iter()
            .filter(|l| l.contains(&JudgmentLabel::Unsure))
            .count();
        values.insert(Feature::UnsureVoters, pct(unsure, voters.len()));

        let simple = g.simple_directed();
        values.insert(Feature::Reciprocity, Some(reciprocity(&simple)));
        for &f in rewire_fractions {
            let r = rewire(&simple, f, seed)?;
            values.insert(
                Feature::RewiredReciprocity((f * 100.0).round() as u32),
                Some(reciprocity(&r.edges)),
            );
        }

        let comments = &record.comments;
        values.insert(Feature::Comments, Some(comments.len() as f64));
        values.insert(
            Feature::AvgWords,
            mean(
                comments
                    .iter()
                    .map(|c| c.message.body.split_whitespace().count() as f64),
            ),
        );
        values.insert(
            Feature::AvgScore,
            mean(
                comments
                    .iter()
                    .filter_map(|c| c.message.score)
                    .map(|s| s as f64),
            ),
        );
        let duration = record.duration_secs();
        values.insert(Feature::DurationSecs, Some(duration as f64));
        values.insert(
            Feature::CommentsPerMinute,
            (duration > 0).then(|| g.edge_count() as f64 / (duration as f64 / 60.0)),
        );
        values.insert(Feature::Sentiment, record.root.sentiment);

        Ok(ThreadFeatures {
            thread_id: record.thread_id.clone(),
            entropy: disagreement_entropy(record.votes(policy)).entropy,
            values,
        })
    }

    pub fn get(&self, f: Feature) -> Option<f64> {
        self.values
            .get(&f)
            .copied()
            .flatten()
            .filter(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Entropy or the feature is constant over the valid threads.
    Undefined,
    /// Fewer than three threads with both values.
    Insufficient,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::Undefined => "undefined",
            RowStatus::Insufficient => "insufficient",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub feature: Feature,
    pub rho: Option<f64>,
    pub p_value: Option<f64>,
    pub n: usize,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
}

/// Spearman correlation of every feature with thread entropy.
///
/// The sentiment row appears only when some thread carries a sentiment.
pub fn correlation_report(threads: &[ThreadFeatures], features: &[Feature]) -> CorrelationReport {
    let rows = features
        .iter()
        .filter(|&&f| f != Feature::Sentiment || threads.iter().any(|t| t.get(f).is_some()))
        .map(|&feature| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = threads
                .iter()
                .filter_map(|t| Some((t.entropy?, t.get(feature)?)))
                .unzip();
            let n = xs.len();
            match spearman(&xs, &ys) {
                Ok(c) if c.rho.is_some() => CorrelationRow {
                    feature,
                    rho: c.rho,
                    p_value: c.p_value,
                    n,
                    status: RowStatus::Ok,
                },
                Ok(_) => CorrelationRow {
                    feature,
                    rho: None,
                    p_value: None,
                    n,
                    status: RowStatus::Undefined,
                },
                Err(_) => CorrelationRow {
                    feature,
                    rho: None,
                    p_value: None,
                    n,
                    status: RowStatus::Insufficient,
                },
            }
        })
        .collect();
    CorrelationReport { rows }
}

impl CorrelationReport {
    pub fn row(&self, f: Feature) -> Option<&CorrelationRow> {
        self.rows.iter().find(|r| r.feature == f)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "feature,rho,p_value,n,status")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.feature,
                crate::metrics::opt(r.rho),
                crate::metrics::opt(r.p_value),
                r.n,
                r.status
            )?;
        }
        Ok(())
    }

    /// Aligned table; `***` marks p < .001.
    pub fn write_table<W: Write>(&self, mut w: W) -> Result<()> {
        let width = self
            .rows
            .iter()
            .map(|r| r.feature.to_string().len())
            .max()
            .unwrap_or(7)
            .max(7);
        writeln!(
            w,
            "{:<width$}  {:>9}  {:>10}  {:>6}",
            "feature", "rho", "p", "n"
        )?;
        for r in &self.rows {
            let (rho, p) = match (r.rho, r.p_value) {
                (Some(rho), Some(p)) => {
                    let stars = if p < 0.001 { "***" } else { "" };
                    (format!("{rho:.3}{stars}"), format!("{p:.4}"))
                }
                _ => (r.status.to_string(), String::new()),
            };
            writeln!(
                w,
                "{:<width$}  {:>9}  {:>10}  {:>6}",
                r.feature.to_string(),
                rho,
                p,
                r.n
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: usize, entropy: Option<f64>, x: Option<f64>) -> ThreadFeatures {
        ThreadFeatures {
            thread_id: format!("t{id}"),
            entropy,
            values: [(Feature::Comments, x)].into_iter().collect(),
        }
    }

    #[test]
    fn constant_entropy_gives_undefined_rows() {
        let threads: Vec<_> = (0..10).map(|i| row(i, Some(1.0), Some(i as f64))).collect();
        let r = correlation_report(&threads, &Feature::all(&[20, 50, 90]));
        assert!(r.rows.iter().all(|r| r.rho.is_none()));
        assert_eq!(
            r.row(Feature::Comments).unwrap().status,
            RowStatus::Undefined
        );
        assert_eq!(
            r.row(Feature::Aspl).unwrap().status,
            RowStatus::Insufficient
        );
        assert!(r.row(Feature::Sentiment).is_none());
    }

    #[test]
    fn rows_skip_missing_values() {
        let mut threads: Vec<_> = (0..10)
            .map(|i| row(i, Some(i as f64), Some(2.0 * i as f64)))
            .collect();
        threads.push(row(10, None, Some(0.0)));
        threads.push(row(11, Some(0.0), None));
        let r = correlation_report(&threads, &[Feature::Comments]);
        let c = r.row(Feature::Comments).unwrap();
        assert_eq!((c.rho, c.n), (Some(1.0), 10));
        let mut table = Vec::new();
        r.write_table(&mut table).unwrap();
        assert!(String::from_utf8(table).unwrap().contains("1.000***"));
    }
}
