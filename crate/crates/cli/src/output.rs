//! Output directory bookkeeping and the content-hash manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

pub const MANIFEST: &str = "manifest.txt";

/// Every file written through this handle is listed in the manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `rel` (slash-separated) through a buffered writer.
    pub fn write<F>(&mut self, rel: &str, body: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write) -> threadgraph::Result<()>,
    {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut w = BufWriter::new(File::create(&path)?);
        body(&mut w)?;
        w.flush()?;
        if !self.written.iter().any(|r| r == rel) {
            self.written.push(rel.to_string());
        }
        Ok(())
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        self.write(rel, |w| Ok(w.write_all(bytes)?))
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// Writes `manifest.txt`: `sha256  path` per written file, sorted by path.
    pub fn finish(self) -> Result<PathBuf> {
        let mut rels = self.written.clone();
        rels.sort();
        let mut out = String::new();
        for rel in &rels {
            let digest = Sha256::digest(fs::read(self.root.join(rel))?);
            out.push_str(&format!("{}  {rel}\n", hex::encode(digest)));
        }
        let path = self.root.join(MANIFEST);
        fs::write(&path, out)?;
        Ok(path)
    }
}

/// A file-name-safe rendering of a thread id.
pub fn file_stem(thread_id: &str) -> String {
    thread_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}
