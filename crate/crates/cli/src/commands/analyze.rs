use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use threadgraph::dynamics::{
    bin_and_average, response_times, summarize, thread_speeds, ResponseTimeSummary, ThreadSpeeds,
    VoteClass,
};
use threadgraph::graph::SubgraphTag;
use threadgraph::metrics::{trace, MetricTrace};
use threadgraph::stats::{
    correlation_report, degree_sample, disagreement_entropy, fit_power_law, rank_sum_test, Band,
    DisagreementReport, Feature, FitOptions, PowerLawFit, ThreadFeatures,
};
use threadgraph::{TemporalMultigraph, ThreadRecord, TraceConfig};

use super::{open_output, opt};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{file_stem, OutputDir};
use crate::store::read_store;

pub const FAILURES: &str = "failures.txt";
const ENTROPY_BIN: f64 = 0.13;
const ENTROPY_BINS: usize = 20;
const GAMMA_BIN: f64 = 0.1;

/// Users of one thread by where they joined and whether they voted.
#[derive(Debug, Clone, Copy, Default)]
struct UserShare {
    users: usize,
    star_users: usize,
    star_voters: usize,
    periphery_voters: usize,
}

struct ThreadResult {
    id: String,
    trace: MetricTrace,
    speeds: Vec<ThreadSpeeds>,
    cells: Vec<ResponseTimeSummary>,
    disagreement: DisagreementReport,
    fit: std::result::Result<PowerLawFit, String>,
    features: ThreadFeatures,
    share: UserShare,
}

fn user_share(g: &TemporalMultigraph) -> UserShare {
    let mut s = UserShare::default();
    for (v, joined) in g.vertices.iter().zip(g.joined_in_star()) {
        let Some(star) = joined else { continue };
        s.users += 1;
        match (star, v.voted()) {
            (true, voted) => {
                s.star_users += 1;
                s.star_voters += usize::from(voted);
            }
            (false, voted) => s.periphery_voters += usize::from(voted),
        }
    }
    s
}

fn analyze_thread(rec: &ThreadRecord, cfg: &RunConfig) -> threadgraph::Result<ThreadResult> {
    let g = TemporalMultigraph::from_thread(rec);
    let mode = cfg.mode.resolve(g.vertex_count(), cfg.vertex_cap);
    let tc = TraceConfig {
        stride: cfg.stride,
        vertex_cap: cfg.vertex_cap,
        landmarks: cfg.landmarks,
        seed: cfg.seed,
    };
    let trace = trace(&g, mode, &tc)?;
    let speeds = cfg
        .delta_m
        .iter()
        .map(|&dm| thread_speeds(&g, dm, cfg.speed_unit))
        .collect();
    let policy = cfg.vote_policy();
    let fit = fit_power_law(&degree_sample(&g, cfg.degree), &FitOptions::default())
        .map_err(|e| e.to_string());
    let features = ThreadFeatures::extract(rec, &g, trace.last(), &policy, &cfg.rewire, cfg.seed)?;
    Ok(ThreadResult {
        id: rec.thread_id.clone(),
        speeds,
        cells: response_times(&g),
        disagreement: disagreement_entropy(rec.votes(&policy)),
        fit,
        features,
        share: user_share(&g),
        trace,
    })
}

fn write_thread_files(out: &mut OutputDir, r: &ThreadResult) -> Result<()> {
    let dir = format!("threads/{}", file_stem(&r.id));
    out.write(&format!("{dir}/metrics.csv"), |w| r.trace.write_csv(w))?;
    out.write(&format!("{dir}/speeds.csv"), |w| {
        for (i, s) in r.speeds.iter().enumerate() {
            s.write_csv(&mut *w, i == 0)?;
        }
        Ok(())
    })?;
    out.write(&format!("{dir}/response_times.csv"), |w| {
        ResponseTimeSummary::write_csv(&r.cells, w)
    })?;
    out.write_bytes(
        &format!("{dir}/disagreement.txt"),
        r.disagreement.to_string().as_bytes(),
    )?;
    let fit = match &r.fit {
        Ok(f) => f.to_string(),
        Err(e) => format!("status = not fitted\nreason = {e}\n"),
    };
    out.write_bytes(&format!("{dir}/powerlaw.txt"), fit.as_bytes())
}

/// Corpus-mean trace by step over the threads that reach each step.
fn write_metrics_mean(w: &mut dyn Write, results: &[ThreadResult]) -> threadgraph::Result<()> {
    #[derive(Default)]
    struct Acc {
        n: usize,
        density: (f64, usize),
        gcc: f64,
        aspl: (f64, usize),
    }
    let mut by_k: BTreeMap<usize, Acc> = BTreeMap::new();
    for s in results.iter().flat_map(|r| &r.trace.samples) {
        let a = by_k.entry(s.k).or_default();
        a.n += 1;
        a.gcc += s.gcc;
        if let Some(d) = s.density {
            a.density = (a.density.0 + d, a.density.1 + 1);
        }
        if let Some(l) = s.aspl {
            a.aspl = (a.aspl.0 + l, a.aspl.1 + 1);
        }
    }
    let mean = |(s, n): (f64, usize)| (n > 0).then(|| s / n as f64);
    writeln!(w, "k,threads,density,gcc,aspl")?;
    for (k, a) in by_k {
        writeln!(
            w,
            "{k},{},{},{},{}",
            a.n,
            opt(mean(a.density)),
            a.gcc / a.n as f64,
            opt(mean(a.aspl))
        )?;
    }
    Ok(())
}

fn write_pooled_response(out: &mut OutputDir, results: &[ThreadResult]) -> Result<()> {
    let mut pooled: Vec<ResponseTimeSummary> = Vec::new();
    for i in 0..4 {
        let first = &results[0].cells[i];
        let raw: Vec<i64> = results
            .iter()
            .flat_map(|r| r.cells[i].raw.iter().copied())
            .collect();
        pooled.push(summarize(first.tag, first.class, raw));
    }
    out.write("corpus/response_times.csv", |w| {
        ResponseTimeSummary::write_csv(&pooled, w)
    })?;
    out.write("corpus/response_tests.csv", |w| {
        writeln!(w, "subgraph,n_voting,n_non_voting,u,z,p_value")?;
        for tag in [SubgraphTag::Star, SubgraphTag::Periphery] {
            let cell = |class| {
                pooled
                    .iter()
                    .find(|c| c.tag == tag && c.class == class)
                    .expect("four cells")
            };
            let as_f64 =
                |c: &ResponseTimeSummary| c.raw.iter().map(|&x| x as f64).collect::<Vec<_>>();
            let (v, nv) = (cell(VoteClass::Voting), cell(VoteClass::NonVoting));
            match rank_sum_test(&as_f64(v), &as_f64(nv)) {
                Ok(t) => writeln!(
                    w,
                    "{tag},{},{},{},{},{}",
                    v.raw.len(),
                    nv.raw.len(),
                    t.u,
                    t.z,
                    t.p_value
                )?,
                Err(_) => writeln!(w, "{tag},{},{},,,", v.raw.len(), nv.raw.len())?,
            }
        }
        Ok(())
    })
}

fn write_entropy(out: &mut OutputDir, results: &[ThreadResult]) -> Result<()> {
    out.write("corpus/entropy.csv", |w| {
        writeln!(w, "thread_id,votes,entropy,band")?;
        for r in results {
            let d = &r.disagreement;
            writeln!(
                w,
                "{},{},{},{}",
                r.id,
                d.votes(),
                opt(d.entropy),
                opt(d.band)
            )?;
        }
        Ok(())
    })?;
    let mut counts = [0usize; ENTROPY_BINS];
    for h in results.iter().filter_map(|r| r.disagreement.entropy) {
        counts[((h / ENTROPY_BIN + 1e-9).floor() as usize).min(ENTROPY_BINS - 1)] += 1;
    }
    out.write("corpus/entropy_hist.csv", |w| {
        writeln!(w, "bin,lo,hi,band,threads")?;
        for (i, c) in counts.iter().enumerate() {
            let lo = i as f64 * ENTROPY_BIN;
            let hi = lo + ENTROPY_BIN;
            writeln!(
                w,
                "{i},{lo:.2},{hi:.2},{},{c}",
                Band::of(lo + ENTROPY_BIN / 2.0)
            )?;
        }
        Ok(())
    })
}

fn write_powerlaw(out: &mut OutputDir, results: &[ThreadResult]) -> Result<()> {
    out.write("corpus/powerlaw.csv", |w| {
        writeln!(w, "thread_id,gamma,xmin,ks,p_value,n_tail,n")?;
        for r in results {
            if let Ok(f) = &r.fit {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.id, f.gamma, f.x_min, f.ks, f.p_value, f.n_tail, f.n
                )?;
            }
        }
        Ok(())
    })?;
    let mut hist: BTreeMap<i64, usize> = BTreeMap::new();
    for f in results.iter().filter_map(|r| r.fit.as_ref().ok()) {
        *hist
            .entry((f.gamma / GAMMA_BIN).floor() as i64)
            .or_default() += 1;
    }
    out.write("corpus/gamma_hist.csv", |w| {
        writeln!(w, "lo,hi,threads")?;
        if let (Some((&first, _)), Some((&last, _))) =
            (hist.first_key_value(), hist.last_key_value())
        {
            for b in first..=last {
                let lo = b as f64 * GAMMA_BIN;
                writeln!(
                    w,
                    "{lo:.1},{:.1},{}",
                    lo + GAMMA_BIN,
                    hist.get(&b).copied().unwrap_or(0)
                )?;
            }
        }
        Ok(())
    })
}

fn pct(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| 100.0 * part as f64 / whole as f64)
}

fn write_user_share(out: &mut OutputDir, results: &[ThreadResult]) -> Result<()> {
    out.write("corpus/user_share.csv", |w| {
        writeln!(
            w,
            "thread_id,users,star_users,star_pct,star_voters_pct,periphery_voters_pct"
        )?;
        for r in results {
            let s = r.share;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.id,
                s.users,
                s.star_users,
                opt(pct(s.star_users, s.users)),
                opt(pct(s.star_voters, s.star_users)),
                opt(pct(s.periphery_voters, s.users - s.star_users))
            )?;
        }
        Ok(())
    })?;
    let total = results.iter().fold(UserShare::default(), |a, r| UserShare {
        users: a.users + r.share.users,
        star_users: a.star_users + r.share.star_users,
        star_voters: a.star_voters + r.share.star_voters,
        periphery_voters: a.periphery_voters + r.share.periphery_voters,
    });
    let summary = format!(
        "users = {}\nstar_pct = {}\nstar_voters_pct = {}\nperiphery_voters_pct = {}\n",
        total.users,
        opt(pct(total.star_users, total.users)),
        opt(pct(total.star_voters, total.star_users)),
        opt(pct(total.periphery_voters, total.users - total.star_users)),
    );
    out.write_bytes("corpus/user_share_summary.txt", summary.as_bytes())
}

fn write_features(
    out: &mut OutputDir,
    results: &[ThreadResult],
    features: &[Feature],
) -> Result<()> {
    out.write("corpus/features.csv", |w| {
        write!(w, "thread_id,entropy")?;
        for f in features {
            write!(w, ",{f}")?;
        }
        writeln!(w)?;
        for r in results {
            write!(w, "{},{}", r.id, opt(r.features.entropy))?;
            for &f in features {
                write!(w, ",{}", opt(r.features.get(f)))?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;
    out.write("corpus/reciprocity.csv", |w| {
        let rewired: Vec<Feature> = features
            .iter()
            .copied()
            .filter(|f| matches!(f, Feature::RewiredReciprocity(_)))
            .collect();
        write!(w, "thread_id,reciprocity")?;
        for f in &rewired {
            write!(w, ",{f}")?;
        }
        writeln!(w)?;
        for r in results {
            write!(w, "{},{}", r.id, opt(r.features.get(Feature::Reciprocity)))?;
            for &f in &rewired {
                write!(w, ",{}", opt(r.features.get(f)))?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

/// Summary of an analyze run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzeSummary {
    pub threads: usize,
    pub failed: usize,
    pub files: usize,
}

/// Analyzes one store. Threads are processed in parallel and written in
/// thread-id order; a failing thread is logged and left out of the corpus
/// outputs.
pub fn analyze(cfg: &RunConfig) -> Result<AnalyzeSummary> {
    let store = match cfg.inputs.as_slice() {
        [one] => one.as_path(),
        _ => {
            return Err(CliError::Usage(
                "analyze takes exactly one store directory".into(),
            ))
        }
    };
    let threads = read_store(store)?;
    analyze_threads(cfg, &threads, store)
}

fn analyze_threads(
    cfg: &RunConfig,
    threads: &[ThreadRecord],
    store: &Path,
) -> Result<AnalyzeSummary> {
    let outcomes: Vec<threadgraph::Result<ThreadResult>> =
        threads.par_iter().map(|t| analyze_thread(t, cfg)).collect();
    let mut out = open_output(cfg)?;
    let mut results = Vec::with_capacity(outcomes.len());
    let mut failures = String::new();
    for (t, o) in threads.iter().zip(outcomes) {
        match o {
            Ok(r) => {
                write_thread_files(&mut out, &r)?;
                results.push(r);
            }
            Err(e) => {
                log::error!("thread {}: {e}", t.thread_id);
                failures.push_str(&format!("{}: {e}\n", t.thread_id));
            }
        }
    }
    if results.is_empty() {
        out.write_bytes(FAILURES, failures.as_bytes())?;
        out.finish()?;
        return Err(CliError::Data(format!(
            "no thread of {} could be analyzed",
            store.display()
        )));
    }

    out.write("corpus/metrics_mean.csv", |w| {
        write_metrics_mean(w, &results)
    })?;
    for (i, dm) in cfg.delta_m.iter().enumerate() {
        let speeds: Vec<ThreadSpeeds> = results.iter().map(|r| r.speeds[i].clone()).collect();
        match bin_and_average(&speeds, cfg.bins, cfg.bin_method) {
            Ok(b) => {
                out.write(&format!("corpus/bins_dm{dm}_summary.csv"), |w| {
                    b.write_summary_csv(w)
                })?;
                out.write(&format!("corpus/bins_dm{dm}_profiles.csv"), |w| {
                    b.write_profiles_csv(w)
                })?;
            }
            Err(e) => {
                log::warn!("duration bins for delta_m {dm}: {e}");
                failures.push_str(&format!("corpus bins delta_m={dm}: {e}\n"));
            }
        }
    }
    write_pooled_response(&mut out, &results)?;
    write_entropy(&mut out, &results)?;
    write_powerlaw(&mut out, &results)?;
    write_user_share(&mut out, &results)?;

    let percents: Vec<u32> = cfg
        .rewire
        .iter()
        .map(|f| (f * 100.0).round() as u32)
        .collect();
    let features = Feature::all(&percents);
    write_features(&mut out, &results, &features)?;
    let extracted: Vec<ThreadFeatures> = results.iter().map(|r| r.features.clone()).collect();
    let report = correlation_report(&extracted, &features);
    out.write("corpus/correlation.csv", |w| report.write_csv(w))?;
    out.write("corpus/correlation.txt", |w| report.write_table(w))?;
    out.write_bytes(FAILURES, failures.as_bytes())?;

    let summary = AnalyzeSummary {
        threads: results.len(),
        failed: threads.len() - results.len(),
        files: out.files().len(),
    };
    out.finish()?;
    Ok(summary)
}
