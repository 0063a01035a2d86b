//! Sampled-source estimates of path length and diameter for large graphs.
//!
//! Density and clustering stay exact (they only need the running counters).
//! Mean path length is averaged over BFS trees from `s` sources drawn
//! uniformly from the largest component; the diameter estimate is the
//! largest eccentricity seen, tightened by one extra sweep from the farthest
//! vertex found. Components at most `s` vertices large are evaluated exactly.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::growth::GrowingGraph;
use super::StructuralCounts;
use crate::graph::VertexId;

#[derive(Debug, Clone)]
pub struct LandmarkEngine {
    graph: GrowingGraph,
    parent: Vec<VertexId>,
    size: Vec<u64>,
    min_vertex: Vec<VertexId>,
    sources: usize,
    seed: u64,
    dist: Vec<u32>,
}

impl LandmarkEngine {
    pub fn new(capacity: usize, sources: usize, seed: u64) -> Self {
        LandmarkEngine {
            graph: GrowingGraph::new(capacity),
            parent: (0..capacity).collect(),
            size: vec![1; capacity],
            min_vertex: (0..capacity).collect(),
            sources: sources.max(1),
            seed,
            dist: vec![u32::MAX; capacity],
        }
    }

    fn find(&mut self, mut v: VertexId) -> VertexId {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub fn push_edge(&mut self, from: VertexId, to: VertexId) {
        let g = self.graph.push_edge(from, to);
        if !g.new_undirected {
            return;
        }
        let (a, b) = (self.find(from), self.find(to));
        if a != b {
            let (big, small) = if self.size[a] >= self.size[b] {
                (a, b)
            } else {
                (b, a)
            };
            self.parent[small] = big;
            self.size[big] += self.size[small];
            self.min_vertex[big] = self.min_vertex[big].min(self.min_vertex[small]);
        }
    }

    fn largest_component(&mut self) -> Vec<VertexId> {
        let n = self.graph.capacity();
        let mut best: Option<(u64, VertexId, VertexId)> = None;
        for v in 0..n {
            if !self.graph.is_present(v) {
                continue;
            }
            let r = self.find(v);
            if r != v {
                continue;
            }
            let key = (self.size[r], self.min_vertex[r], r);
            best = match best {
                Some(b) if (b.0, std::cmp::Reverse(b.1)) >= (key.0, std::cmp::Reverse(key.1)) => {
                    Some(b)
                }
                _ => Some(key),
            };
        }
        let Some((_, _, root)) = best else {
            return Vec::new();
        };
        (0..n)
            .filter(|&v| self.graph.is_present(v) && self.find(v) == root)
            .collect()
    }

    /// BFS from `src`; returns (distance sum, farthest vertex, eccentricity).
    /// Ties on the farthest vertex go to the smallest id.
    fn bfs(&mut self, src: VertexId, touched: &mut Vec<VertexId>) -> (u64, VertexId, u32) {
        for &v in touched.iter() {
            self.dist[v] = u32::MAX;
        }
        touched.clear();
        self.dist[src] = 0;
        touched.push(src);
        let mut queue = VecDeque::from([src]);
        let (mut sum, mut far, mut ecc) = (0u64, src, 0u32);
        while let Some(x) = queue.pop_front() {
            let d = self.dist[x];
            sum += d as u64;
            if d > ecc || (d == ecc && x < far) {
                ecc = d;
                far = x;
            }
            for &y in self.graph.neighbours(x) {
                if self.dist[y] == u32::MAX {
                    self.dist[y] = d + 1;
                    touched.push(y);
                    queue.push_back(y);
                }
            }
        }
        (sum, far, ecc)
    }

    /// Exact counters plus the sampled path statistics; `lcc_distance_sum`
    /// is left at zero and the mean is reported separately.
    pub fn estimate(&mut self, step: u64) -> Estimate {
        let lcc = self.largest_component();
        let n = lcc.len();
        let mut touched = Vec::new();
        let (mean, diameter) = if n < 2 {
            (None, 0)
        } else {
            let chosen: Vec<VertexId> = if n <= self.sources {
                lcc.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(step);
                let mut idx = sample(&mut rng, n, self.sources).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| lcc[i]).collect()
            };
            let (mut total, mut best_ecc, mut best_far) = (0u64, 0u32, chosen[0]);
            for &s in &chosen {
                let (sum, far, ecc) = self.bfs(s, &mut touched);
                total += sum;
                if ecc > best_ecc || (ecc == best_ecc && far < best_far) {
                    best_ecc = ecc;
                    best_far = far;
                }
            }
            if n > self.sources {
                let (_, _, ecc) = self.bfs(best_far, &mut touched);
                best_ecc = best_ecc.max(ecc);
            }
            let mean = total as f64 / (chosen.len() as f64 * (n - 1) as f64);
            (Some(mean), best_ecc)
        };
        for &v in &touched {
            self.dist[v] = u32::MAX;
        }
        Estimate {
            counts: StructuralCounts {
                vertices: self.graph.vertex_count(),
                directed_edges: self.graph.directed_count(),
                triangles: self.graph.triangles(),
                triplets: self.graph.triplets(),
                lcc_size: n as u64,
                lcc_distance_sum: 0,
                lcc_diameter: diameter,
            },
            mean_path: mean,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub counts: StructuralCounts,
    pub mean_path: Option<f64>,
}
