//! Degree-preserving randomisation of a simple directed graph.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RewireOutcome {
    pub edges: BTreeSet<(VertexId, VertexId)>,
    pub swaps: usize,
    /// Original edges removed by at least one swap.
    pub displaced: usize,
    pub target: usize,
    /// Rejected swap attempts (self-loop, duplicate or no-op).
    pub rejected: usize,
    /// False when the attempt budget ran out before `target` was reached.
    pub complete: bool,
}

/// Double-edge swaps `(a→b), (c→d)` into `(a→d), (c→b)` until
/// `⌈f·|E|⌉` distinct original edges have been swapped out.
///
/// Swaps that would create a self-loop or a duplicate edge are rejected, so
/// in- and out-degrees are preserved exactly. At most `100·|E| + 1000`
/// attempts are made.
pub fn rewire(edges: &BTreeSet<(VertexId, VertexId)>, f: f64, seed: u64) -> Result<RewireOutcome> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidParams(format!(
            "rewiring fraction must lie in [0, 1], got {f}"
        )));
    }
    if edges.iter().any(|(a, b)| a == b) {
        return Err(Error::InvalidParams(
            "rewiring expects a graph without self-loops".into(),
        ));
    }
    let target = (f * edges.len() as f64).ceil() as usize;
    let mut list: Vec<(VertexId, VertexId)> = edges.iter().copied().collect();
    let mut present: HashSet<(VertexId, VertexId)> = list.iter().copied().collect();
    let mut displaced: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut swaps, mut rejected) = (0usize, 0usize);
    let budget = 100 * list.len() + 1000;

    let mut attempts = 0;
    while displaced.len() < target && list.len() >= 2 && attempts < budget {
        attempts += 1;
        let i = rng.random_range(0..list.len());
        let j = rng.random_range(0..list.len());
        let ((a, b), (c, d)) = (list[i], list[j]);
        if i == j
            || a == c
            || b == d
            || a == d
            || c == b
            || present.contains(&(a, d))
            || present.contains(&(c, b))
        {
            rejected += 1;
            continue;
        }
        present.remove(&(a, b));
        present.remove(&(c, d));
        present.insert((a, d));
        present.insert((c, b));
        list[i] = (a, d);
        list[j] = (c, b);
        for e in [(a, b), (c, d)] {
            if edges.contains(&e) {
                displaced.insert(e);
            }
        }
        swaps += 1;
    }

    let complete = displaced.len() >= target;
    if !complete {
        log::warn!(
            "rewiring stopped at {} of {target} displaced edges after {attempts} attempts",
            displaced.len()
        );
    }
    Ok(RewireOutcome {
        edges: list.into_iter().collect(),
        swaps,
        displaced: displaced.len(),
        target,
        rejected,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn degrees(g: &BTreeSet<(usize, usize)>, n: usize) -> (Vec<usize>, Vec<usize>) {
        let (mut out, mut inn) = (vec![0; n], vec![0; n]);
        for &(a, b) in g {
            out[a] += 1;
            inn[b] += 1;
        }
        (out, inn)
    }

    #[test]
    fn zero_fraction_is_identity() {
        let g: BTreeSet<_> = [(0, 1), (1, 2), (2, 0), (3, 1)].into_iter().collect();
        let r = rewire(&g, 0.0, 1).unwrap();
        assert_eq!(r.edges, g);
        assert_eq!(r.swaps, 0);
        assert!(r.complete);
    }

    #[test]
    fn no_legal_swap_leaves_graph_unchanged() {
        // Every swap of a 2-cycle would create self-loops.
        let g: BTreeSet<_> = [(0, 1), (1, 0)].into_iter().collect();
        let r = rewire(&g, 0.5, 3).unwrap();
        assert_eq!(r.edges, g);
        assert!(!r.complete);
        assert!(r.rejected > 0);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let g: BTreeSet<_> = (0..40)
            .map(|i| (i, (i * 7 + 3) % 41))
            .filter(|(a, b)| a != b)
            .collect();
        assert_eq!(rewire(&g, 0.5, 9).unwrap(), rewire(&g, 0.5, 9).unwrap());
    }

    proptest! {
        #[test]
        fn degree_sequences_survive(pairs in prop::collection::vec((0usize..30, 0usize..30), 2..120), f in prop::sample::select(vec![0.2, 0.5, 0.9]), seed in 0u64..1000) {
            let g: BTreeSet<_> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            let r = rewire(&g, f, seed).unwrap();
            prop_assert_eq!(r.edges.len(), g.len());
            prop_assert_eq!(degrees(&r.edges, 30), degrees(&g, 30));
            prop_assert!(r.edges.iter().all(|(a, b)| a != b));
            prop_assert!(r.displaced <= g.len());
        }
    }
}
