//! Growing-network analysis of threaded online conversations.
//!
//! A conversation (one post plus its comment tree) is rebuilt as a directed
//! temporal multigraph of user interactions, then replayed edge by edge to
//! trace structural metrics, split into star and periphery subgraphs for
//! growth-speed and response-time analysis, and summarised with disagreement
//! entropy, reciprocity, power-law degree fits and rank-correlation reports.
//!
//! The crate is organised by pipeline stage:
//!
//! - [`ingest`]: newline-delimited dump parsing, judgment extraction, thread assembly.
//! - [`generator`]: seeded synthetic thread corpora.
//! - [`graph`]: the temporal multigraph, snapshots and replay.
//! - [`metrics`]: density, clustering, path lengths; incremental and oracle engines.
//! - [`dynamics`]: growth speeds, duration bins, response times.
//! - [`stats`]: entropy, reciprocity, power-law fits, rewiring, Spearman.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod generator;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod stats;

pub use error::{Error, Result};
pub use generator::{generate_corpus, generate_thread, Attachment, GeneratorParams};
pub use graph::{Snapshot, TemporalMultigraph, TimedEdge};
pub use ingest::{
    extract_judgment, parse_dump, Comment, FormatProfile, JudgmentLabel, ParseReport, RawMessage,
    ThreadRecord, VotePolicy,
};
pub use metrics::{MetricMode, MetricSample, MetricTrace, TraceConfig};
