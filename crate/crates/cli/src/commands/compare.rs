use std::io::Write;

use threadgraph::dynamics::{bin_and_average, thread_speeds, DeltaM};
use threadgraph::TemporalMultigraph;

use super::{open_output, opt};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::store::read_store;

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub store: String,
    pub bin: usize,
    pub lo_secs: f64,
    pub hi_secs: f64,
    pub threads: usize,
    pub mean_star: Option<f64>,
    pub mean_periphery: Option<f64>,
    pub ratio: Option<f64>,
}

fn write_rows(w: &mut dyn Write, dm: DeltaM, rows: &[CompareRow]) -> std::io::Result<()> {
    writeln!(
        w,
        "store,delta_m,bin,lo_secs,hi_secs,threads,mean_star,mean_periphery,ratio"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{dm},{},{},{},{},{},{},{}",
            r.store,
            r.bin,
            r.lo_secs,
            r.hi_secs,
            r.threads,
            opt(r.mean_star),
            opt(r.mean_periphery),
            opt(r.ratio)
        )?;
    }
    Ok(())
}

/// Aligned rendering of the comparison rows on stdout.
pub fn print_table(dm: DeltaM, rows: &[CompareRow]) {
    let width = rows.iter().map(|r| r.store.len()).max().unwrap_or(5).max(5);
    println!("delta_m = {dm} min");
    println!(
        "{:<width$}  {:>3}  {:>10}  {:>10}  {:>7}  {:>9}  {:>9}  {:>7}",
        "store", "bin", "lo_secs", "hi_secs", "threads", "star", "periphery", "ratio"
    );
    let f = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
    for r in rows {
        println!(
            "{:<width$}  {:>3}  {:>10.0}  {:>10.0}  {:>7}  {:>9}  {:>9}  {:>7}",
            r.store,
            r.bin,
            r.lo_secs,
            r.hi_secs,
            r.threads,
            f(r.mean_star),
            f(r.mean_periphery),
            f(r.ratio)
        );
    }
}

/// Bins every store by duration and tabulates the star/periphery speed
/// ratio, one row per store per bin, using the first configured interval.
pub fn compare(cfg: &RunConfig) -> Result<Vec<CompareRow>> {
    if cfg.inputs.len() < 2 {
        return Err(CliError::Usage(
            "compare needs at least two store directories".into(),
        ));
    }
    let dm = cfg.delta_m[0];
    let mut rows = Vec::new();
    for store in &cfg.inputs {
        let threads = read_store(store)?;
        let speeds: Vec<_> = threads
            .iter()
            .map(|t| thread_speeds(&TemporalMultigraph::from_thread(t), dm, cfg.speed_unit))
            .collect();
        let bins = bin_and_average(&speeds, cfg.bins, cfg.bin_method)
            .map_err(|e| CliError::Data(format!("{}: {e}", store.display())))?;
        let name = store.display().to_string();
        rows.extend(bins.bins.iter().map(|b| CompareRow {
            store: name.clone(),
            bin: b.index,
            lo_secs: b.lo,
            hi_secs: b.hi,
            threads: b.thread_ids.len(),
            mean_star: b.mean_star,
            mean_periphery: b.mean_periphery,
            ratio: b.ratio,
        }));
    }
    let mut out = open_output(cfg)?;
    out.write("compare.csv", |w| Ok(write_rows(w, dm, &rows)?))?;
    out.finish()?;
    Ok(rows)
}
