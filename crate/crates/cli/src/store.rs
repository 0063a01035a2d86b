//! On-disk thread store: one newline-delimited file per thread.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use threadgraph::ingest::{open_dump, write_thread};
use threadgraph::{parse_dump, FormatProfile, ThreadRecord};

use crate::error::{CliError, Result};
use crate::output::{file_stem, OutputDir};

pub const THREAD_EXT: &str = "jsonl";

/// Writes each thread to `<stem>.jsonl` under `out`.
pub fn write_store(out: &mut OutputDir, threads: &[ThreadRecord]) -> Result<()> {
    for t in threads {
        out.write(&format!("{}.{THREAD_EXT}", file_stem(&t.thread_id)), |w| {
            write_thread(w, t)
        })?;
    }
    Ok(())
}

fn thread_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(CliError::Data(format!(
            "store {} does not exist or is not a directory",
            dir.display()
        )));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == THREAD_EXT))
        .collect();
    files.sort();
    Ok(files)
}

/// Loads every thread of a store, sorted by thread id. Files that fail to
/// parse are logged and skipped; an empty result is a data error.
pub fn read_store(dir: &Path) -> Result<Vec<ThreadRecord>> {
    let files = thread_files(dir)?;
    let profile = FormatProfile::canonical();
    let loaded: Vec<Result<Vec<ThreadRecord>>> = files
        .par_iter()
        .map(|path| {
            let (threads, report) = parse_dump(open_dump(path)?, &profile)?;
            if report.malformed_skipped > 0 || report.threads_rejected > 0 {
                log::warn!("{}: {report}", path.display());
            }
            Ok(threads)
        })
        .collect();
    let mut threads = Vec::new();
    for (path, r) in files.iter().zip(loaded) {
        match r {
            Ok(t) => threads.extend(t),
            Err(e) => log::error!("skipping {}: {e}", path.display()),
        }
    }
    if threads.is_empty() {
        return Err(CliError::Data(format!(
            "store {} holds no valid threads",
            dir.display()
        )));
    }
    threads.sort_by(|a, b| a.thread_id.cmp(&b.thread_id));
    Ok(threads)
}
