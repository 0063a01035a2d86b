use threadgraph::generate_corpus;

use super::open_output;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::store::write_store;

/// Generates `count` threads per preset (one per dial step for `coupled`)
/// and writes them as a store. Returns the number of threads.
pub fn generate(cfg: &RunConfig) -> Result<usize> {
    if cfg.count == 0 {
        return Err(CliError::Usage("count must be at least 1".into()));
    }
    let jobs: Vec<_> = cfg
        .generator_params()?
        .into_iter()
        .flat_map(|(p, n)| std::iter::repeat_n(p, n))
        .collect();
    let threads = generate_corpus(&jobs, 1, cfg.seed)?;
    let mut out = open_output(cfg)?;
    write_store(&mut out, &threads)?;
    out.finish()?;
    Ok(threads.len())
}
