use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::label::{extract_judgment, JudgmentLabel};
use crate::{Error, Result};

/// One post or comment as read from a dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawMessage {
    pub id: String,
    /// Absent for the post (thread root).
    pub parent_id: Option<String>,
    pub thread_id: String,
    /// Absent when the account was deleted.
    pub author: Option<String>,
    /// Unix epoch seconds.
    pub created_at: i64,
    pub body: String,
    pub score: Option<i64>,
    /// Precomputed sentiment, passed through untouched.
    pub sentiment: Option<f64>,
}

impl RawMessage {
    pub fn is_root(&self) -> bool {
        self.parent_id.is_none()
    }

    /// Vertex id of the author; deleted accounts get a per-message synthetic id.
    pub fn author_vertex(&self) -> String {
        match &self.author {
            Some(a) => a.clone(),
            None => format!("deleted:{}", self.id),
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("empty message id".into());
        }
        if self.created_at <= 0 {
            return Err(format!("message {} has non-positive timestamp", self.id));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comment {
    pub message: RawMessage,
    /// 1 for a direct reply to the post.
    pub depth: u32,
    pub label: JudgmentLabel,
}

/// A validated conversation: the post plus its time-ordered comment tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreadRecord {
    pub thread_id: String,
    pub root: RawMessage,
    /// Sorted by `(created_at, id)`.
    pub comments: Vec<Comment>,
    pub duplicates_dropped: usize,
    pub orphans_dropped: usize,
}

/// Which comments count as votes for disagreement entropy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VotePolicy {
    /// Only first-level comments vote.
    pub depth_one_only: bool,
    /// Only comments posted within this many seconds of the post vote.
    pub window_secs: Option<i64>,
}

impl VotePolicy {
    /// The community's voting window.
    pub const VERDICT_WINDOW_SECS: i64 = 18 * 3600;

    pub fn admits(&self, root: &RawMessage, comment: &Comment) -> bool {
        if self.depth_one_only && comment.depth != 1 {
            return false;
        }
        match self.window_secs {
            Some(w) => comment.message.created_at - root.created_at <= w,
            None => true,
        }
    }
}

impl ThreadRecord {
    /// Assembles a thread from all messages sharing one thread id.
    ///
    /// Duplicate ids keep the earliest copy. Comments whose ancestry does not
    /// reach the post are dropped together with their subtrees. Fails when
    /// the group has no root or several.
    pub fn build(thread_id: &str, messages: Vec<RawMessage>) -> Result<ThreadRecord> {
        let reject = |reason: String| Error::InvalidThread {
            thread_id: thread_id.to_string(),
            reason,
        };

        let mut by_id: HashMap<String, RawMessage> = HashMap::with_capacity(messages.len());
        let mut duplicates = 0usize;
        for m in messages {
            m.check().map_err(reject)?;
            match by_id.get_mut(&m.id) {
                Some(existing) => {
                    duplicates += 1;
                    if m.created_at < existing.created_at {
                        *existing = m;
                    }
                }
                None => {
                    by_id.insert(m.id.clone(), m);
                }
            }
        }

        let roots: Vec<&RawMessage> = by_id.values().filter(|m| m.is_root()).collect();
        let root = match roots.as_slice() {
            [] => return Err(reject("no root message".into())),
            [r] => (*r).clone(),
            many => {
                let mut ids: Vec<&str> = many.iter().map(|m| m.id.as_str()).collect();
                ids.sort_unstable();
                return Err(reject(format!(
                    "multiple root messages: {}",
                    ids.join(", ")
                )));
            }
        };

        let mut children: HashMap<&str, Vec<&str>> = HashMap::new();
        for m in by_id.values() {
            if let Some(p) = &m.parent_id {
                children.entry(p.as_str()).or_default().push(m.id.as_str());
            }
        }

        let mut depth: HashMap<&str, u32> = HashMap::with_capacity(by_id.len());
        let mut stack = vec![(root.id.as_str(), 0u32)];
        while let Some((id, d)) = stack.pop() {
            depth.insert(id, d);
            if let Some(kids) = children.get(id) {
                for &kid in kids {
                    if !depth.contains_key(kid) {
                        stack.push((kid, d + 1));
                    }
                }
            }
        }

        let orphans = by_id.len() - depth.len();
        let mut comments: Vec<Comment> = by_id
            .values()
            .filter(|m| !m.is_root())
            .filter_map(|m| {
                depth.get(m.id.as_str()).map(|&d| Comment {
                    message: m.clone(),
                    depth: d,
                    label: extract_judgment(&m.body),
                })
            })
            .collect();
        comments.sort_by(|a, b| {
            (a.message.created_at, &a.message.id).cmp(&(b.message.created_at, &b.message.id))
        });

        Ok(ThreadRecord {
            thread_id: thread_id.to_string(),
            root,
            comments,
            duplicates_dropped: duplicates,
            orphans_dropped: orphans,
        })
    }

    /// Checks every record invariant, including the two-comment minimum.
    pub fn validate(&self) -> Result<()> {
        let reject = |reason: String| Error::InvalidThread {
            thread_id: self.thread_id.clone(),
            reason,
        };
        if self.comments.len() < 2 {
            return Err(reject(format!(
                "{} comments, need at least 2",
                self.comments.len()
            )));
        }
        self.root.check().map_err(reject)?;
        if !self.root.is_root() {
            return Err(reject("root message has a parent".into()));
        }
        let mut depth: HashMap<&str, u32> = HashMap::new();
        depth.insert(self.root.id.as_str(), 0);
        let mut seen = HashSet::new();
        seen.insert(self.root.id.as_str());
        for c in &self.comments {
            c.message.check().map_err(reject)?;
            if !seen.insert(c.message.id.as_str()) {
                return Err(reject(format!("duplicate id {}", c.message.id)));
            }
            if c.message.thread_id != self.thread_id {
                return Err(reject(format!(
                    "comment {} belongs to another thread",
                    c.message.id
                )));
            }
            if c.message.parent_id.is_none() {
                return Err(reject(format!("comment {} has no parent", c.message.id)));
            }
            depth.insert(c.message.id.as_str(), c.depth);
        }
        for (i, c) in self.comments.iter().enumerate() {
            let parent = c.message.parent_id.as_deref().unwrap_or_default();
            match depth.get(parent) {
                Some(&pd) if pd + 1 == c.depth => {}
                Some(_) => {
                    return Err(reject(format!(
                        "comment {} has inconsistent depth",
                        c.message.id
                    )))
                }
                None => {
                    return Err(reject(format!(
                        "comment {} has a missing parent",
                        c.message.id
                    )))
                }
            }
            if i > 0 {
                let prev = &self.comments[i - 1].message;
                if (prev.created_at, &prev.id) > (c.message.created_at, &c.message.id) {
                    return Err(reject("comments are not time-ordered".into()));
                }
            }
        }
        Ok(())
    }

    pub fn message(&self, id: &str) -> Option<&RawMessage> {
        if self.root.id == id {
            return Some(&self.root);
        }
        self.comments
            .iter()
            .map(|c| &c.message)
            .find(|m| m.id == id)
    }

    /// Labels of the comments admitted by `policy`, in time order.
    pub fn votes(&self, policy: &VotePolicy) -> Vec<JudgmentLabel> {
        self.comments
            .iter()
            .filter(|c| policy.admits(&self.root, c))
            .map(|c| c.label)
            .collect()
    }

    /// Seconds between the first and the last comment.
    pub fn duration_secs(&self) -> i64 {
        match (self.comments.first(), self.comments.last()) {
            (Some(a), Some(b)) => b.message.created_at - a.message.created_at,
            _ => 0,
        }
    }
}
