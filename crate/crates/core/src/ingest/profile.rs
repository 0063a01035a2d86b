use std::str::FromStr;

use crate::config::KvConfig;
use crate::{Error, Result};

/// Field-name mapping from one dump flavour onto [`RawMessage`](super::RawMessage).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatProfile {
    pub name: String,
    pub id_key: String,
    pub parent_key: String,
    /// Records without this key fall back to their parent's thread when they are a
    /// root, i.e. a post's thread id is its own id.
    pub thread_key: String,
    pub author_key: String,
    pub created_key: String,
    /// First key present wins (comments use `body`, posts often `selftext`).
    pub body_keys: Vec<String>,
    pub score_key: String,
    pub sentiment_key: String,
    /// Strip Reddit fullname prefixes (`t1_`, `t3_`) from ids and references.
    pub strip_prefixes: bool,
    /// Author values meaning the account is gone.
    pub deleted_authors: Vec<String>,
}

impl FormatProfile {
    /// The store format written by this crate.
    pub fn canonical() -> Self {
        FormatProfile {
            name: "canonical".into(),
            id_key: "id".into(),
            parent_key: "parent_id".into(),
            thread_key: "thread_id".into(),
            author_key: "author".into(),
            created_key: "created_at".into(),
            body_keys: vec!["body".into()],
            score_key: "score".into(),
            sentiment_key: "sentiment".into(),
            strip_prefixes: false,
            deleted_authors: vec![],
        }
    }

    /// Flat exports produced by PRAW scripts: `submission_id`, fullname
    /// parents, float `created_utc`, and `None` for deleted authors.
    pub fn praw() -> Self {
        FormatProfile {
            name: "praw".into(),
            id_key: "id".into(),
            parent_key: "parent_id".into(),
            thread_key: "submission_id".into(),
            author_key: "author".into(),
            created_key: "created_utc".into(),
            body_keys: vec!["body".into(), "selftext".into()],
            score_key: "score".into(),
            sentiment_key: "sentiment".into(),
            strip_prefixes: true,
            deleted_authors: vec!["None".into(), "[deleted]".into()],
        }
    }

    /// Pushshift dump lines (comments and submissions mixed).
    pub fn pushshift() -> Self {
        FormatProfile {
            name: "pushshift".into(),
            id_key: "id".into(),
            parent_key: "parent_id".into(),
            thread_key: "link_id".into(),
            author_key: "author".into(),
            created_key: "created_utc".into(),
            body_keys: vec!["body".into(), "selftext".into()],
            score_key: "score".into(),
            sentiment_key: "sentiment".into(),
            strip_prefixes: true,
            deleted_authors: vec!["[deleted]".into(), "[removed]".into()],
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "canonical" => Some(Self::canonical()),
            "praw" => Some(Self::praw()),
            "pushshift" => Some(Self::pushshift()),
            _ => None,
        }
    }

    /// Builds a profile from a config file: `base = <builtin>` plus any key overrides
    /// (`id`, `parent_id`, `thread_id`, `author`, `created_at`, `body`, `score`,
    /// `sentiment`, `strip_prefixes`, `deleted_authors`).
    pub fn from_config(cfg: &KvConfig) -> Result<Self> {
        let base = cfg.get("base").unwrap_or("canonical");
        let mut p = Self::builtin(base)
            .ok_or_else(|| Error::Config(format!("unknown base profile {base:?}")))?;
        p.name = cfg.get("name").unwrap_or(base).to_string();
        let set = |slot: &mut String, key: &str| {
            if let Some(v) = cfg.get(key) {
                *slot = v.to_string();
            }
        };
        set(&mut p.id_key, "id");
        set(&mut p.parent_key, "parent_id");
        set(&mut p.thread_key, "thread_id");
        set(&mut p.author_key, "author");
        set(&mut p.created_key, "created_at");
        set(&mut p.score_key, "score");
        set(&mut p.sentiment_key, "sentiment");
        if let Some(keys) = cfg.list::<String>("body")? {
            p.body_keys = keys;
        }
        if let Some(b) = cfg.bool("strip_prefixes")? {
            p.strip_prefixes = b;
        }
        if let Some(d) = cfg.list::<String>("deleted_authors")? {
            p.deleted_authors = d;
        }
        Ok(p)
    }

    pub(crate) fn normalize_ref<'a>(&self, raw: &'a str) -> &'a str {
        if self.strip_prefixes {
            if let Some((kind, rest)) = raw.split_once('_') {
                if kind.len() == 2 && kind.starts_with('t') && kind.as_bytes()[1].is_ascii_digit() {
                    return rest;
                }
            }
        }
        raw
    }
}

impl FromStr for FormatProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::builtin(s).ok_or_else(|| {
            Error::Config(format!(
                "unknown format profile {s:?} (expected canonical, praw or pushshift)"
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fullname_prefixes_stripped() {
        let p = FormatProfile::pushshift();
        assert_eq!(p.normalize_ref("t3_abc"), "abc");
        assert_eq!(p.normalize_ref("t1_x_y"), "x_y");
        assert_eq!(p.normalize_ref("plain"), "plain");
        assert_eq!(FormatProfile::canonical().normalize_ref("t3_abc"), "t3_abc");
    }

    #[test]
    fn config_overrides_base() {
        let cfg =
            KvConfig::parse("base = pushshift\ncreated_at = ts\nbody = text, selftext\n").unwrap();
        let p = FormatProfile::from_config(&cfg).unwrap();
        assert_eq!(p.created_key, "ts");
        assert_eq!(p.body_keys, vec!["text", "selftext"]);
        assert!(p.strip_prefixes);
        assert!(FormatProfile::from_config(&KvConfig::parse("base = nope").unwrap()).is_err());
    }
}
