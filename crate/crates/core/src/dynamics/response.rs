use std::fmt;
use std::io::Write;

use crate::graph::{SubgraphTag, TemporalMultigraph};
use crate::metrics::opt;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VoteClass {
    /// Any comment carrying a judgment, unsure ones included.
    Voting,
    NonVoting,
}

impl fmt::Display for VoteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VoteClass::Voting => "voting",
            VoteClass::NonVoting => "non-voting",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTimeSummary {
    pub tag: SubgraphTag,
    pub class: VoteClass,
    /// Seconds between each comment and its parent, in comment order.
    pub raw: Vec<i64>,
    pub mean: Option<f64>,
    /// Population standard deviation; absent below two samples.
    pub sigma: Option<f64>,
    /// Mean over `[μ − 2σ, μ + 2σ]`; the plain mean below two samples.
    pub filtered_mean: Option<f64>,
    pub filtered_count: usize,
}

/// Moments and the two-sigma filtered mean of one cell.
pub fn summarize(tag: SubgraphTag, class: VoteClass, raw: Vec<i64>) -> ResponseTimeSummary {
    let n = raw.len() as f64;
    let mean = (!raw.is_empty()).then(|| raw.iter().map(|&r| r as f64).sum::<f64>() / n);
    let (sigma, filtered_mean, filtered_count) = match mean {
        Some(mu) if raw.len() >= 2 => {
            let sigma = (raw.iter().map(|&r| (r as f64 - mu).powi(2)).sum::<f64>() / n).sqrt();
            let (lo, hi) = (mu - 2.0 * sigma, mu + 2.0 * sigma);
            let kept: Vec<f64> = raw
                .iter()
                .map(|&r| r as f64)
                .filter(|r| (lo..=hi).contains(r))
                .collect();
            let fm = (!kept.is_empty()).then(|| kept.iter().sum::<f64>() / kept.len() as f64);
            (Some(sigma), fm, kept.len())
        }
        _ => (None, mean, raw.len()),
    };
    ResponseTimeSummary {
        tag,
        class,
        raw,
        mean,
        sigma,
        filtered_mean,
        filtered_count,
    }
}

/// The four star/periphery by voting/non-voting cells, in that order.
pub fn response_times(g: &TemporalMultigraph) -> Vec<ResponseTimeSummary> {
    let cells = [
        (SubgraphTag::Star, VoteClass::Voting),
        (SubgraphTag::Star, VoteClass::NonVoting),
        (SubgraphTag::Periphery, VoteClass::Voting),
        (SubgraphTag::Periphery, VoteClass::NonVoting),
    ];
    cells
        .into_iter()
        .map(|(tag, class)| {
            let raw = g
                .edges
                .iter()
                .filter(|e| {
                    (e.is_star == (tag == SubgraphTag::Star))
                        && (e.label.is_voting_comment() == (class == VoteClass::Voting))
                })
                .map(|e| e.response_time())
                .collect();
            summarize(tag, class, raw)
        })
        .collect()
}

impl ResponseTimeSummary {
    pub fn write_csv<W: Write>(cells: &[ResponseTimeSummary], mut w: W) -> Result<()> {
        writeln!(w, "subgraph,class,n,mean,sigma,filtered_n,filtered_mean")?;
        for c in cells {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                c.tag,
                c.class,
                c.raw.len(),
                opt(c.mean),
                opt(c.sigma),
                c.filtered_count,
                opt(c.filtered_mean)
            )?;
        }
        Ok(())
    }
}
