use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use rayon::prelude::*;
use serde_json::{Map, Value};

use super::profile::FormatProfile;
use super::record::{RawMessage, ThreadRecord};
use crate::{Error, Result};

/// Counters describing what `parse_dump` kept and discarded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub records_read: usize,
    pub malformed_skipped: usize,
    pub duplicates_removed: usize,
    pub orphans_dropped: usize,
    /// Threads without exactly one root.
    pub threads_rejected: usize,
    /// Threads left with fewer than two comments.
    pub threads_dropped: usize,
    pub threads_kept: usize,
}

impl ParseReport {
    pub fn merge(&mut self, other: &ParseReport) {
        self.records_read += other.records_read;
        self.malformed_skipped += other.malformed_skipped;
        self.duplicates_removed += other.duplicates_removed;
        self.orphans_dropped += other.orphans_dropped;
        self.threads_rejected += other.threads_rejected;
        self.threads_dropped += other.threads_dropped;
        self.threads_kept += other.threads_kept;
    }
}

impl fmt::Display for ParseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records_read = {}", self.records_read)?;
        writeln!(f, "malformed_skipped = {}", self.malformed_skipped)?;
        writeln!(f, "duplicates_removed = {}", self.duplicates_removed)?;
        writeln!(f, "orphans_dropped = {}", self.orphans_dropped)?;
        writeln!(f, "threads_rejected = {}", self.threads_rejected)?;
        writeln!(f, "threads_dropped = {}", self.threads_dropped)?;
        writeln!(f, "threads_kept = {}", self.threads_kept)
    }
}

/// Opens a dump file, transparently decompressing gzip input.
pub fn open_dump(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let mut reader = BufReader::new(File::open(path)?);
    let is_gzip = reader.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    if is_gzip {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(reader))))
    } else {
        Ok(Box::new(reader))
    }
}

/// Reads newline-delimited JSON records and assembles validated threads.
///
/// Malformed lines are counted and skipped; only a failing reader is fatal.
/// Threads come back sorted by thread id.
pub fn parse_dump<R: BufRead>(
    mut reader: R,
    profile: &FormatProfile,
) -> Result<(Vec<ThreadRecord>, ParseReport)> {
    let mut report = ParseReport::default();
    let mut groups: BTreeMap<String, Vec<RawMessage>> = BTreeMap::new();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        let Ok(line) = std::str::from_utf8(&buf) else {
            report.records_read += 1;
            report.malformed_skipped += 1;
            continue;
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        report.records_read += 1;
        match decode_record(line, profile) {
            Some(m) => groups.entry(m.thread_id.clone()).or_default().push(m),
            None => report.malformed_skipped += 1,
        }
    }

    let built: Vec<(String, Result<ThreadRecord>)> = groups
        .into_par_iter()
        .map(|(tid, msgs)| {
            let rec = ThreadRecord::build(&tid, msgs);
            (tid, rec)
        })
        .collect();

    let mut threads = Vec::new();
    for (tid, rec) in built {
        match rec {
            Err(e) => {
                log::warn!("thread {tid} rejected: {e}");
                report.threads_rejected += 1;
            }
            Ok(rec) => {
                report.duplicates_removed += rec.duplicates_dropped;
                report.orphans_dropped += rec.orphans_dropped;
                if rec.comments.len() < 2 {
                    report.threads_dropped += 1;
                } else {
                    threads.push(rec);
                }
            }
        }
    }
    report.threads_kept = threads.len();
    Ok((threads, report))
}

/// Decodes one JSON line into a message; `None` when it is malformed.
pub fn decode_record(line: &str, profile: &FormatProfile) -> Option<RawMessage> {
    let value: Value = serde_json::from_str(line).ok()?;
    let obj = value.as_object()?;

    let id = profile
        .normalize_ref(&string_field(obj, &profile.id_key)?)
        .to_string();
    if id.is_empty() {
        return None;
    }
    let parent_id = string_field(obj, &profile.parent_key)
        .filter(|p| !p.is_empty())
        .map(|p| profile.normalize_ref(&p).to_string());
    let thread_id = match string_field(obj, &profile.thread_key).filter(|t| !t.is_empty()) {
        Some(t) => profile.normalize_ref(&t).to_string(),
        None if parent_id.is_none() => id.clone(),
        None => return None,
    };
    let author = string_field(obj, &profile.author_key)
        .filter(|a| !a.is_empty() && !profile.deleted_authors.iter().any(|d| d == a));
    let created_at = timestamp_field(obj.get(&profile.created_key)?)?;
    if created_at <= 0 {
        return None;
    }
    let body = profile
        .body_keys
        .iter()
        .find_map(|k| obj.get(k).and_then(Value::as_str))
        .unwrap_or_default()
        .to_string();
    let score = obj.get(&profile.score_key).and_then(|v| match v {
        Value::Number(n) => n.as_i64().or_else(|| n.as_f64().map(|f| f.round() as i64)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    });
    let sentiment = obj.get(&profile.sentiment_key).and_then(|v| match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    });

    Some(RawMessage {
        id,
        parent_id,
        thread_id,
        author,
        created_at,
        body,
        score,
        sentiment,
    })
}

fn string_field(obj: &Map<String, Value>, key: &str) -> Option<String> {
    match obj.get(key)? {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn timestamp_field(v: &Value) -> Option<i64> {
    let secs = match v {
        Value::Number(n) => n
            .as_i64()
            .or_else(|| n.as_f64().map(f64::floor).map(|f| f as i64))?,
        Value::String(s) => {
            let s = s.trim();
            s.parse::<i64>()
                .ok()
                .or_else(|| s.parse::<f64>().ok().map(|f| f.floor() as i64))?
        }
        _ => return None,
    };
    Some(secs)
}

/// Writes a thread in the canonical store format: the post line, then one line per comment.
pub fn write_thread<W: Write>(mut w: W, record: &ThreadRecord) -> Result<()> {
    let line = |m: &RawMessage| serde_json::to_string(m).map_err(|e| Error::Io(e.into()));
    writeln!(w, "{}", line(&record.root)?)?;
    for c in &record.comments {
        writeln!(w, "{}", line(&c.message)?)?;
    }
    Ok(())
}

pub fn serialize_thread(record: &ThreadRecord) -> String {
    let mut out = Vec::new();
    write_thread(&mut out, record).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
