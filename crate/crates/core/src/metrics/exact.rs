//! Exact incremental all-pairs distances for a growing undirected graph.
//!
//! Distances live in a dense lower-triangular `u16` table. Each connected
//! component keeps a histogram of its pairwise distances, so the path-length
//! sum and the diameter of any component are available without a scan.
//!
//! Inserting an edge `(u, v)`:
//! - across two components: every cross pair gets `d(x,u) + 1 + d(v,y)`;
//! - inside one component: only pairs with `x` strictly closer to `u` and `y`
//!   strictly closer to `v` (by more than one hop) can shrink, and those are
//!   relaxed to `min(d(x,y), d(x,u) + 1 + d(v,y))` using pre-insertion values.

use super::growth::GrowingGraph;
use super::StructuralCounts;
use crate::graph::VertexId;

const INF: u16 = u16::MAX;
const NO_COMPONENT: usize = usize::MAX;

/// Largest vertex count the `u16` table can represent.
pub const MAX_EXACT_VERTICES: usize = INF as usize;

#[derive(Debug, Clone)]
struct Component {
    members: Vec<VertexId>,
    min_vertex: VertexId,
    /// `hist[d]` = number of unordered pairs at distance `d`.
    hist: Vec<u64>,
    sum: u64,
    max: usize,
}

impl Component {
    fn singleton(v: VertexId) -> Self {
        Component {
            members: vec![v],
            min_vertex: v,
            hist: vec![0],
            sum: 0,
            max: 0,
        }
    }

    fn add(&mut self, d: u16) {
        let d = d as usize;
        if d >= self.hist.len() {
            self.hist.resize(d + 1, 0);
        }
        self.hist[d] += 1;
        self.sum += d as u64;
        self.max = self.max.max(d);
    }

    fn remove(&mut self, d: u16) {
        let d = d as usize;
        self.hist[d] -= 1;
        self.sum -= d as u64;
    }

    fn settle_max(&mut self) {
        while self.max > 0 && self.hist[self.max] == 0 {
            self.max -= 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactEngine {
    graph: GrowingGraph,
    table: Vec<u16>,
    comp_of: Vec<usize>,
    comps: Vec<Option<Component>>,
}

#[inline]
fn tri(a: VertexId, b: VertexId) -> usize {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    j * (j - 1) / 2 + i
}

impl ExactEngine {
    /// Engine for vertex ids `0..capacity`.
    pub fn new(capacity: usize) -> Self {
        assert!(
            capacity <= MAX_EXACT_VERTICES,
            "exact engine supports at most {MAX_EXACT_VERTICES} vertices"
        );
        ExactEngine {
            graph: GrowingGraph::new(capacity),
            table: vec![INF; capacity * capacity.saturating_sub(1) / 2],
            comp_of: vec![NO_COMPONENT; capacity],
            comps: Vec::new(),
        }
    }

    /// Shortest-path length in the undirected simple projection; `None` if disconnected.
    pub fn distance(&self, a: VertexId, b: VertexId) -> Option<u16> {
        if a == b {
            return self.graph.is_present(a).then_some(0);
        }
        match self.table[tri(a, b)] {
            INF => None,
            d => Some(d),
        }
    }

    #[inline]
    fn dist_raw(&self, a: VertexId, b: VertexId) -> u16 {
        if a == b {
            0
        } else {
            self.table[tri(a, b)]
        }
    }

    fn ensure_vertex(&mut self, v: VertexId) {
        if self.comp_of[v] == NO_COMPONENT {
            self.comp_of[v] = self.comps.len();
            self.comps.push(Some(Component::singleton(v)));
        }
    }

    pub fn push_edge(&mut self, from: VertexId, to: VertexId) {
        let growth = self.graph.push_edge(from, to);
        self.ensure_vertex(from);
        self.ensure_vertex(to);
        if !growth.new_undirected {
            return;
        }
        if self.comp_of[from] == self.comp_of[to] {
            self.relax(from, to);
        } else {
            self.merge(from, to);
        }
    }

    fn merge(&mut self, u: VertexId, v: VertexId) {
        let (cu, cv) = (self.comp_of[u], self.comp_of[v]);
        let a = self.comps[cu].take().expect("live component");
        let b = self.comps[cv].take().expect("live component");

        let du: Vec<u16> = a.members.iter().map(|&x| self.dist_raw(x, u)).collect();
        let dv: Vec<u16> = b.members.iter().map(|&y| self.dist_raw(v, y)).collect();
        let mut cross = Component {
            members: Vec::new(),
            min_vertex: VertexId::MAX,
            hist: vec![0],
            sum: 0,
            max: 0,
        };
        for (&x, &dx) in a.members.iter().zip(&du) {
            for (&y, &dy) in b.members.iter().zip(&dv) {
                let d = dx + 1 + dy;
                self.table[tri(x, y)] = d;
                cross.add(d);
            }
        }

        // Keep the larger member list so relabelling stays cheap.
        let (mut keep, other, keep_id) = if a.members.len() >= b.members.len() {
            (a, b, cu)
        } else {
            (b, a, cv)
        };
        for part in [&other, &cross] {
            if part.hist.len() > keep.hist.len() {
                keep.hist.resize(part.hist.len(), 0);
            }
            for (d, &c) in part.hist.iter().enumerate() {
                keep.hist[d] += c;
            }
            keep.sum += part.sum;
            keep.max = keep.max.max(part.max);
        }
        keep.min_vertex = keep.min_vertex.min(other.min_vertex);
        for &w in &other.members {
            self.comp_of[w] = keep_id;
        }
        keep.members.extend_from_slice(&other.members);
        self.comps[keep_id] = Some(keep);
    }

    fn relax(&mut self, u: VertexId, v: VertexId) {
        let cid = self.comp_of[u];
        let mut comp = self.comps[cid].take().expect("live component");
        let mut near_u: Vec<(VertexId, u16)> = Vec::new();
        let mut near_v: Vec<(VertexId, u16)> = Vec::new();
        for &x in &comp.members {
            let (a, b) = (self.dist_raw(x, u), self.dist_raw(x, v));
            if a + 1 < b {
                near_u.push((x, a));
            } else if b + 1 < a {
                near_v.push((x, b));
            }
        }
        for &(x, dxu) in &near_u {
            for &(y, dyv) in &near_v {
                let idx = tri(x, y);
                let old = self.table[idx];
                let cand = dxu + 1 + dyv;
                if cand < old {
                    self.table[idx] = cand;
                    comp.remove(old);
                    comp.add(cand);
                }
            }
        }
        comp.settle_max();
        self.comps[cid] = Some(comp);
    }

    pub fn counts(&self) -> StructuralCounts {
        let lcc = self
            .comps
            .iter()
            .flatten()
            .min_by_key(|c| (std::cmp::Reverse(c.members.len()), c.min_vertex));
        let (lcc_size, lcc_distance_sum, lcc_diameter) = match lcc {
            Some(c) => (c.members.len() as u64, c.sum, c.max as u32),
            None => (0, 0, 0),
        };
        StructuralCounts {
            vertices: self.graph.vertex_count(),
            directed_edges: self.graph.directed_count(),
            triangles: self.graph.triangles(),
            triplets: self.graph.triplets(),
            lcc_size,
            lcc_distance_sum,
            lcc_diameter,
        }
    }
}
