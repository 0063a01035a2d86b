use std::collections::HashSet;

use crate::graph::VertexId;

/// What a pushed multigraph edge changed in the simple projections.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Growth {
    pub new_from: bool,
    pub new_to: bool,
    pub new_undirected: bool,
}

/// Simple projections of a growing multigraph with running triangle and
/// connected-triplet counters.
#[derive(Debug, Clone)]
pub struct GrowingGraph {
    present: Vec<bool>,
    present_count: u64,
    directed: HashSet<(VertexId, VertexId)>,
    adj: Vec<HashSet<VertexId>>,
    triangles: u64,
    triplets: u64,
}

impl GrowingGraph {
    pub fn new(capacity: usize) -> Self {
        GrowingGraph {
            present: vec![false; capacity],
            present_count: 0,
            directed: HashSet::new(),
            adj: vec![HashSet::new(); capacity],
            triangles: 0,
            triplets: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.present.len()
    }

    /// Marks `v` as present; returns true if it was new.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if v >= self.present.len() {
            self.present.resize(v + 1, false);
            self.adj.resize(v + 1, HashSet::new());
        }
        if self.present[v] {
            return false;
        }
        self.present[v] = true;
        self.present_count += 1;
        true
    }

    pub fn push_edge(&mut self, from: VertexId, to: VertexId) -> Growth {
        let mut g = Growth {
            new_from: self.add_vertex(from),
            new_to: self.add_vertex(to),
            new_undirected: false,
        };
        if from == to || !self.directed.insert((from, to)) {
            return g;
        }
        if self.adj[from].contains(&to) {
            return g;
        }
        let (small, large) = if self.adj[from].len() <= self.adj[to].len() {
            (from, to)
        } else {
            (to, from)
        };
        let common = self.adj[small]
            .iter()
            .filter(|x| self.adj[large].contains(x))
            .count() as u64;
        self.triangles += common;
        // New triplets centred on each endpoint: one per existing neighbour.
        self.triplets += (self.adj[from].len() + self.adj[to].len()) as u64;
        self.adj[from].insert(to);
        self.adj[to].insert(from);
        g.new_undirected = true;
        g
    }

    pub fn is_present(&self, v: VertexId) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    pub fn vertex_count(&self) -> u64 {
        self.present_count
    }

    pub fn directed_count(&self) -> u64 {
        self.directed.len() as u64
    }

    pub fn triangles(&self) -> u64 {
        self.triangles
    }

    pub fn triplets(&self) -> u64 {
        self.triplets
    }

    pub fn neighbours(&self, v: VertexId) -> &HashSet<VertexId> {
        &self.adj[v]
    }
}
