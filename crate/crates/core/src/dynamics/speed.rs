use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::graph::{SubgraphTag, TemporalMultigraph, TimedEdge};
use crate::{Error, Result};

/// Interval length in minutes; one of 1, 10 or 60.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaM(u32);

impl DeltaM {
    pub const ONE: DeltaM = DeltaM(1);
    pub const TEN: DeltaM = DeltaM(10);
    pub const SIXTY: DeltaM = DeltaM(60);
    pub const ALL: [DeltaM; 3] = [DeltaM::ONE, DeltaM::TEN, DeltaM::SIXTY];

    pub fn new(minutes: u32) -> Result<Self> {
        match minutes {
            1 | 10 | 60 => Ok(DeltaM(minutes)),
            _ => Err(Error::InvalidParams(format!(
                "interval must be 1, 10 or 60 minutes, got {minutes}"
            ))),
        }
    }

    pub fn minutes(self) -> u32 {
        self.0
    }

    pub fn secs(self) -> i64 {
        self.0 as i64 * 60
    }
}

impl fmt::Display for DeltaM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for DeltaM {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .trim()
            .parse::<u32>()
            .map_err(|e| Error::Config(format!("interval {s:?}: {e}")))?;
        DeltaM::new(m)
    }
}

/// What a speed counts per minute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpeedUnit {
    /// Multigraph edges (one per comment).
    #[default]
    Edges,
    /// Vertices seen for the first time in the subgraph.
    Nodes,
}

impl fmt::Display for SpeedUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpeedUnit::Edges => "edges",
            SpeedUnit::Nodes => "nodes",
        })
    }
}

impl FromStr for SpeedUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(SpeedUnit::Edges),
            "nodes" => Ok(SpeedUnit::Nodes),
            _ => Err(Error::Config(format!("unknown speed unit {s:?}"))),
        }
    }
}

/// Items gained per interval. Speeds are `count / Δm`, in items per minute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeedProfile {
    /// `None` for the whole graph.
    pub tag: Option<SubgraphTag>,
    pub delta_m: DeltaM,
    pub counts: Vec<u64>,
}

impl SpeedProfile {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn speed(&self, i: usize) -> f64 {
        self.counts
            .get(i)
            .map_or(0.0, |&c| c as f64 / self.delta_m.0 as f64)
    }

    pub fn speeds(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.counts.len()).map(|i| self.speed(i))
    }

    /// `Σ S·Δm`, i.e. the number of items the profile covers.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Mean speed over the profile's intervals; 0 for an empty profile.
    pub fn mean_speed(&self) -> f64 {
        if self.counts.is_empty() {
            0.0
        } else {
            self.total() as f64 / (self.counts.len() as f64 * self.delta_m.0 as f64)
        }
    }

    fn label(&self) -> String {
        self.tag
            .map_or_else(|| "whole".to_string(), |t| t.to_string())
    }
}

/// Speed profile of an event timeline.
///
/// Intervals start at `span.0` (default: the first event) and run through
/// `span.1` (default: the last event); intervals without events count 0.
/// An empty timeline yields an empty profile.
pub fn growth_speed(times: &[i64], delta_m: DeltaM, span: Option<(i64, i64)>) -> SpeedProfile {
    let mut profile = SpeedProfile {
        tag: None,
        delta_m,
        counts: Vec::new(),
    };
    let (Some(&first), Some(&last)) = (times.iter().min(), times.iter().max()) else {
        return profile;
    };
    let (start, end) = span.unwrap_or((first, last));
    let (start, end) = (start.min(first), end.max(last));
    let width = delta_m.secs();
    profile.counts = vec![0; ((end - start) / width + 1) as usize];
    for &t in times {
        profile.counts[((t - start) / width) as usize] += 1;
    }
    profile
}

fn node_times<'a>(edges: impl Iterator<Item = &'a TimedEdge>) -> Vec<i64> {
    let mut seen = HashSet::new();
    let mut times = Vec::new();
    for e in edges {
        for v in [e.to, e.from] {
            if seen.insert(v) {
                times.push(e.t);
            }
        }
    }
    times
}

/// Star, periphery and whole-graph profiles of one thread, all anchored at
/// the first edge and running to the last.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreadSpeeds {
    pub thread_id: String,
    pub delta_m: DeltaM,
    /// Seconds from the first to the last edge.
    pub duration_secs: i64,
    pub star: SpeedProfile,
    pub periphery: SpeedProfile,
    pub whole: SpeedProfile,
}

impl ThreadSpeeds {
    /// CSV rows `subgraph,delta_m,interval_index,speed`, header included.
    pub fn write_csv<W: Write>(&self, mut w: W, header: bool) -> Result<()> {
        if header {
            writeln!(w, "subgraph,delta_m,interval_index,speed")?;
        }
        for p in [&self.star, &self.periphery, &self.whole] {
            for (i, s) in p.speeds().enumerate() {
                writeln!(w, "{},{},{},{}", p.label(), self.delta_m, i, s)?;
            }
        }
        Ok(())
    }
}

pub fn thread_speeds(g: &TemporalMultigraph, delta_m: DeltaM, unit: SpeedUnit) -> ThreadSpeeds {
    let span = match (g.edges.first(), g.edges.last()) {
        (Some(a), Some(b)) => Some((a.t, b.t)),
        _ => None,
    };
    let timeline = |filter: &dyn Fn(&TimedEdge) -> bool| -> Vec<i64> {
        let edges = g.edges.iter().filter(|e| filter(e));
        match unit {
            SpeedUnit::Edges => edges.map(|e| e.t).collect(),
            SpeedUnit::Nodes => node_times(edges),
        }
    };
    let profile = |tag: Option<SubgraphTag>, times: Vec<i64>| SpeedProfile {
        tag,
        ..growth_speed(&times, delta_m, span)
    };
    ThreadSpeeds {
        thread_id: g.thread_id.clone(),
        delta_m,
        duration_secs: span.map_or(0, |(a, b)| b - a),
        star: profile(Some(SubgraphTag::Star), timeline(&|e| e.is_star)),
        periphery: profile(Some(SubgraphTag::Periphery), timeline(&|e| !e.is_star)),
        whole: profile(None, timeline(&|_| true)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_thread, GeneratorParams};
    use proptest::prelude::*;

    #[test]
    fn five_edges_in_one_minute() {
        let p = growth_speed(&[0, 10, 20, 30, 59], DeltaM::ONE, None);
        assert_eq!(p.counts, vec![5]);
        assert_eq!(p.speed(0), 5.0);
    }

    #[test]
    fn gaps_are_zero() {
        let p = growth_speed(&[0, 200], DeltaM::ONE, None);
        assert_eq!(p.counts, vec![1, 0, 0, 1]);
        assert_eq!(p.speed(1), 0.0);
    }

    #[test]
    fn hourly_normalisation() {
        let times: Vec<i64> = (0..120).map(|i| i * 30).collect();
        let p = growth_speed(&times, DeltaM::SIXTY, None);
        assert_eq!(p.counts, vec![120]);
        assert_eq!(p.speed(0), 2.0);
    }

    #[test]
    fn empty_timeline_is_empty_profile() {
        assert!(growth_speed(&[], DeltaM::TEN, Some((0, 1000))).is_empty());
    }

    #[test]
    fn delta_m_is_restricted() {
        assert!(DeltaM::new(5).is_err());
        assert_eq!("10".parse::<DeltaM>().unwrap(), DeltaM::TEN);
    }

    proptest! {
        #[test]
        fn profiles_conserve_and_partition(seed in 0u64..500, p_root in 0.1f64..1.0) {
            let params = GeneratorParams { n_comments: 150, p_root, seed, ..GeneratorParams::aita_like() };
            let g = TemporalMultigraph::from_thread(&generate_thread(&params).unwrap());
            let (star, periphery) = g.split_star_periphery();
            for dm in DeltaM::ALL {
                let s = thread_speeds(&g, dm, SpeedUnit::Edges);
                prop_assert_eq!(s.star.total(), star.edges.len() as u64);
                prop_assert_eq!(s.periphery.total(), periphery.edges.len() as u64);
                prop_assert_eq!(s.whole.total(), g.edge_count() as u64);
                let conserved: f64 = s.star.speeds().map(|v| v * dm.minutes() as f64).sum();
                prop_assert!((conserved - star.edges.len() as f64).abs() < 1e-6);
                for i in 0..s.whole.len() {
                    let parts = s.star.counts.get(i).copied().unwrap_or(0) + s.periphery.counts.get(i).copied().unwrap_or(0);
                    prop_assert_eq!(parts, s.whole.counts[i]);
                }
                prop_assert!(s.star.speeds().all(|v| v >= 0.0));
            }
        }
    }

    #[test]
    fn node_variant_counts_vertices() {
        let params = GeneratorParams {
            n_comments: 200,
            seed: 9,
            ..GeneratorParams::aita_like()
        };
        let g = TemporalMultigraph::from_thread(&generate_thread(&params).unwrap());
        let s = thread_speeds(&g, DeltaM::TEN, SpeedUnit::Nodes);
        assert_eq!(s.whole.total(), g.vertex_count() as u64);
    }
}
