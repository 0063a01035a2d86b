use std::io::{BufRead, Cursor, Read};

use threadgraph::ingest::open_dump;
use threadgraph::{parse_dump, ParseReport};

use super::open_output;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::store::write_store;

pub const PARSE_REPORT: &str = "parse_report.txt";

/// Parses every input as one stream (threads may span files) and writes the
/// store, the parse report and the manifest.
pub fn ingest(cfg: &RunConfig) -> Result<ParseReport> {
    if cfg.inputs.is_empty() {
        return Err(CliError::Usage(
            "ingest needs at least one input file".into(),
        ));
    }
    let profile = cfg.format_profile()?;
    let mut reader: Box<dyn Read> = Box::new(std::io::empty());
    for path in &cfg.inputs {
        let r = open_dump(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        reader = Box::new(reader.chain(r).chain(Cursor::new(b"\n")));
    }
    let reader: Box<dyn BufRead> = Box::new(std::io::BufReader::new(reader));
    let (threads, report) = parse_dump(reader, &profile)?;
    log::info!("{report}");
    if threads.is_empty() {
        return Err(CliError::Data(format!(
            "no valid threads in the input\n{report}"
        )));
    }
    let mut out = open_output(cfg)?;
    write_store(&mut out, &threads)?;
    out.write_bytes(PARSE_REPORT, report.to_string().as_bytes())?;
    out.finish()?;
    Ok(report)
}
