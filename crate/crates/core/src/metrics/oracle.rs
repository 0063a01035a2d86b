//! From-scratch metric evaluation on a single snapshot.
//!
//! Nothing here is shared with the incremental engine: components and
//! distances come from plain BFS, triangles from edge-wise enumeration.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::StructuralCounts;
use crate::graph::{Snapshot, VertexId};

type Adjacency = BTreeMap<VertexId, BTreeSet<VertexId>>;

fn adjacency(s: &Snapshot) -> Adjacency {
    let mut adj: Adjacency = s.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
    for &(a, b) in &s.undirected {
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    adj
}

fn bfs(adj: &Adjacency, src: VertexId) -> BTreeMap<VertexId, u64> {
    let mut dist = BTreeMap::from([(src, 0u64)]);
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for &y in &adj[&x] {
            if let Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Largest connected component; ties go to the component holding the smallest vertex id.
fn largest_component(adj: &Adjacency) -> Vec<VertexId> {
    let mut seen = BTreeSet::new();
    let mut best: Vec<VertexId> = Vec::new();
    for &v in adj.keys() {
        if seen.contains(&v) {
            continue;
        }
        let comp: Vec<VertexId> = bfs(adj, v).into_keys().collect();
        seen.extend(comp.iter().copied());
        // keys() is ascending, so the first component of a given size has the smallest id.
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

pub fn counts(s: &Snapshot) -> StructuralCounts {
    let adj = adjacency(s);

    let mut triangles = 0u64;
    for &(a, b) in &s.undirected {
        triangles += adj[&a]
            .iter()
            .filter(|&&c| c > b && adj[&b].contains(&c))
            .count() as u64;
    }
    let triplets: u64 = adj
        .values()
        .map(|n| {
            let d = n.len() as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();

    let lcc = largest_component(&adj);
    let mut sum = 0u64;
    let mut max = 0u64;
    for &src in &lcc {
        for (&dst, &d) in &bfs(&adj, src) {
            if dst > src {
                sum += d;
            }
            max = max.max(d);
        }
    }

    StructuralCounts {
        vertices: s.vertices.len() as u64,
        directed_edges: s.directed.len() as u64,
        triangles,
        triplets,
        lcc_size: lcc.len() as u64,
        lcc_distance_sum: sum,
        lcc_diameter: max as u32,
    }
}

pub fn density(s: &Snapshot) -> Option<f64> {
    counts(s).density()
}

pub fn gcc(s: &Snapshot) -> f64 {
    counts(s).gcc()
}

pub fn aspl(s: &Snapshot) -> Option<f64> {
    counts(s).aspl()
}

pub fn diameter(s: &Snapshot) -> Option<u32> {
    counts(s).diameter()
}
