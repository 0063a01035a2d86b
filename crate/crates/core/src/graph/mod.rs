//! Directed temporal multigraph of user interactions.
//!
//! Every comment becomes one edge from its author to the author of the
//! message it answers, stamped with the comment time. Vertices carry the
//! multiset of judgment labels their author expressed.

mod replay;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::Write;

use crate::ingest::{JudgmentLabel, ThreadRecord};
use crate::Result;

pub use replay::{emits_at, Replay, Snapshot};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub name: String,
    /// One entry per comment the user wrote, `None` included.
    pub labels: Vec<JudgmentLabel>,
}

impl Vertex {
    pub fn voted(&self) -> bool {
        self.labels.iter().any(|l| l.is_voting_comment())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedEdge {
    /// Comment author.
    pub from: VertexId,
    /// Author of the parent message.
    pub to: VertexId,
    pub t: i64,
    /// Creation time of the parent message.
    pub parent_t: i64,
    pub message_id: String,
    pub depth: u32,
    pub is_star: bool,
    pub label: JudgmentLabel,
}

impl TimedEdge {
    pub fn is_self_loop(&self) -> bool {
        self.from == self.to
    }

    /// Seconds between the comment and its parent.
    pub fn response_time(&self) -> i64 {
        self.t - self.parent_t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgraphTag {
    Star,
    Periphery,
}

impl fmt::Display for SubgraphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubgraphTag::Star => "star",
            SubgraphTag::Periphery => "periphery",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub tag: SubgraphTag,
    pub edges: Vec<TimedEdge>,
    pub vertices: BTreeSet<VertexId>,
}

impl Subgraph {
    pub fn edge_times(&self) -> Vec<i64> {
        self.edges.iter().map(|e| e.t).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalMultigraph {
    pub thread_id: String,
    /// The post author; always vertex 0.
    pub root: VertexId,
    pub vertices: Vec<Vertex>,
    /// Sorted by `(t, message_id)`.
    pub edges: Vec<TimedEdge>,
}

impl TemporalMultigraph {
    /// Builds the interaction multigraph of one thread.
    ///
    /// Vertex ids follow first appearance: the post author is 0, then users
    /// in comment order.
    pub fn from_thread(record: &ThreadRecord) -> TemporalMultigraph {
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut intern = |name: String, vertices: &mut Vec<Vertex>| -> VertexId {
            *index.entry(name).or_insert_with_key(|k| {
                vertices.push(Vertex {
                    name: k.clone(),
                    labels: Vec::new(),
                });
                vertices.len() - 1
            })
        };

        let root = intern(record.root.author_vertex(), &mut vertices);
        let mut messages: HashMap<&str, (String, i64)> =
            HashMap::with_capacity(record.comments.len() + 1);
        messages.insert(
            &record.root.id,
            (record.root.author_vertex(), record.root.created_at),
        );
        for c in &record.comments {
            messages.insert(
                &c.message.id,
                (c.message.author_vertex(), c.message.created_at),
            );
        }

        let mut edges = Vec::with_capacity(record.comments.len());
        for c in &record.comments {
            let parent = c
                .message
                .parent_id
                .as_deref()
                .expect("comments have parents");
            let (parent_author, parent_t) = messages[parent].clone();
            let to = intern(parent_author, &mut vertices);
            let from = intern(c.message.author_vertex(), &mut vertices);
            vertices[from].labels.push(c.label);
            edges.push(TimedEdge {
                from,
                to,
                t: c.message.created_at,
                parent_t,
                message_id: c.message.id.clone(),
                depth: c.depth,
                is_star: c.depth == 1,
                label: c.label,
            });
        }
        // Comments are already (created_at, id) ordered; keep the sort explicit.
        edges.sort_by(|a, b| (a.t, &a.message_id).cmp(&(b.t, &b.message_id)));

        TemporalMultigraph {
            thread_id: record.thread_id.clone(),
            root,
            vertices,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Deduplicated directed pairs, self-loops removed.
    pub fn simple_directed(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.edges
            .iter()
            .filter(|e| !e.is_self_loop())
            .map(|e| (e.from, e.to))
            .collect()
    }

    /// Deduplicated unordered pairs `(min, max)`, self-loops removed.
    pub fn simple_undirected(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.edges
            .iter()
            .filter(|e| !e.is_self_loop())
            .map(|e| (e.from.min(e.to), e.from.max(e.to)))
            .collect()
    }

    /// Partitions the edges into first-level replies (star) and the rest.
    pub fn split_star_periphery(&self) -> (Subgraph, Subgraph) {
        let mut star = Subgraph {
            tag: SubgraphTag::Star,
            edges: Vec::new(),
            vertices: BTreeSet::new(),
        };
        let mut periphery = Subgraph {
            tag: SubgraphTag::Periphery,
            edges: Vec::new(),
            vertices: BTreeSet::new(),
        };
        for e in &self.edges {
            let sub = if e.is_star { &mut star } else { &mut periphery };
            sub.vertices.insert(e.from);
            sub.vertices.insert(e.to);
            sub.edges.push(e.clone());
        }
        (star, periphery)
    }

    /// For each vertex, whether its author's first comment was first-level.
    /// `None` for users who never commented (the post author, typically).
    pub fn joined_in_star(&self) -> Vec<Option<bool>> {
        let mut joined = vec![None; self.vertices.len()];
        for e in &self.edges {
            if joined[e.from].is_none() {
                joined[e.from] = Some(e.is_star);
            }
        }
        joined
    }

    /// Edge-by-edge growth, emitting a snapshot every `stride` edges and after the last.
    pub fn replay(&self, stride: usize) -> Replay<'_> {
        Replay::new(self, stride)
    }

    /// Tab-separated edge list: `from to t depth label`, one line per comment.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for e in &self.edges {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                self.vertices[e.from].name, self.vertices[e.to].name, e.t, e.depth, e.label
            )?;
        }
        Ok(())
    }
}
