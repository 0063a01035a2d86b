use std::collections::BTreeSet;

use super::{TemporalMultigraph, TimedEdge, VertexId};

/// The graph `G_k` after the first `k` multigraph edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub k: usize,
    /// Time of the k-th edge (`None` before any edge).
    pub t: Option<i64>,
    pub vertices: BTreeSet<VertexId>,
    /// Simple directed projection.
    pub directed: BTreeSet<(VertexId, VertexId)>,
    /// Simple undirected projection, pairs stored as `(min, max)`.
    pub undirected: BTreeSet<(VertexId, VertexId)>,
}

impl Snapshot {
    pub fn empty(root: VertexId) -> Snapshot {
        Snapshot {
            k: 0,
            t: None,
            vertices: BTreeSet::from([root]),
            directed: BTreeSet::new(),
            undirected: BTreeSet::new(),
        }
    }

    /// Snapshot holding `root` plus the given edges.
    pub fn from_edges<'a>(
        root: VertexId,
        edges: impl IntoIterator<Item = &'a TimedEdge>,
    ) -> Snapshot {
        let mut s = Snapshot::empty(root);
        for e in edges {
            s.push(e);
        }
        s
    }

    pub fn push(&mut self, e: &TimedEdge) {
        self.k += 1;
        self.t = Some(e.t);
        self.vertices.insert(e.from);
        self.vertices.insert(e.to);
        if !e.is_self_loop() {
            self.directed.insert((e.from, e.to));
            self.undirected.insert((e.from.min(e.to), e.from.max(e.to)));
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Cumulative replay of a multigraph. Emits after every `stride`-th edge and
/// always after the final one.
pub struct Replay<'g> {
    graph: &'g TemporalMultigraph,
    stride: usize,
    state: Snapshot,
}

impl<'g> Replay<'g> {
    pub(super) fn new(graph: &'g TemporalMultigraph, stride: usize) -> Self {
        assert!(stride >= 1, "replay stride must be at least 1");
        Replay {
            graph,
            stride,
            state: Snapshot::empty(graph.root),
        }
    }
}

impl Iterator for Replay<'_> {
    type Item = Snapshot;

    fn next(&mut self) -> Option<Snapshot> {
        let total = self.graph.edges.len();
        if self.state.k >= total {
            return None;
        }
        let target = (self.state.k + self.stride).min(total);
        for e in &self.graph.edges[self.state.k..target] {
            self.state.push(e);
        }
        Some(self.state.clone())
    }
}

/// Whether replay at `stride` emits a snapshot after `k` of `total` edges.
pub fn emits_at(k: usize, stride: usize, total: usize) -> bool {
    k >= 1 && k <= total && (k.is_multiple_of(stride) || k == total)
}
