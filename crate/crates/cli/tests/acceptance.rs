//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when a criterion fails, except those listed in
//! `KNOWN_UNATTAINABLE`, which are still reported as FAIL.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use threadgraph::dynamics::{
    bin_and_average, summarize, thread_speeds, BinMethod, DeltaM, SpeedUnit, VoteClass,
};
use threadgraph::generator::coupled_params;
use threadgraph::graph::SubgraphTag;
use threadgraph::metrics::{trace, MetricMode, TraceConfig};
use threadgraph::stats::{
    correlation_report, degree_sample, disagreement_entropy, fit_power_law, hurwitz_zeta,
    ks_distance, rank_sum_test, ranks, rewire, spearman, Band, DegreeKind, Feature, FitOptions,
    ThreadFeatures,
};
use threadgraph::{
    generate_corpus, Attachment, GeneratorParams, JudgmentLabel, TemporalMultigraph, VotePolicy,
};

/// Criterion 9 asks for ρ = 0.7 on xs=[1,2,3,4,5], ys=[2,1,4,3,5]. The rank
/// differences are (-1,1,-1,1,0), so Σd² = 4 and ρ = 1 − 24/120 = 0.8.
const KNOWN_UNATTAINABLE: [u32; 1] = [9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Joins sub-checks: all must pass.
fn all(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|o| o.pass),
        detail: parts
            .iter()
            .map(|o| format!("{}{}", if o.pass { "" } else { "[fail] " }, o.detail))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn within(budget: Duration, started: Instant) -> Outcome {
    let took = started.elapsed();
    check(
        took < budget,
        format!("{:.2}s < {}s", took.as_secs_f64(), budget.as_secs()),
    )
}

// Criterion 1.

fn entropy_bits(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 / n as f64)
        .map(|p| -p * p.log2())
        .sum()
}

fn band_by_cuts(h: f64) -> Band {
    if h < 0.65 {
        Band::Low
    } else if h < 1.3 {
        Band::MediumLow
    } else if h < 1.95 {
        Band::MediumHigh
    } else {
        Band::High
    }
}

fn votes(counts: &[u64; 6]) -> Vec<JudgmentLabel> {
    JudgmentLabel::VOTING
        .iter()
        .zip(counts)
        .flat_map(|(&l, &c)| std::iter::repeat_n(l, c as usize))
        .collect()
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let unanimous = disagreement_entropy(votes(&[9, 0, 0, 0, 0, 0])).entropy;
    let uniform = disagreement_entropy(votes(&[4; 6])).entropy.unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatched = 0;
    for i in 0..100 {
        // Concentration rises with i so the sweep spans all four bands.
        let spread = 1 + i % 6;
        let mut counts = [0u64; 6];
        for c in counts.iter_mut().take(spread) {
            *c = rng.random_range(1..40);
        }
        counts[0] += rng.random_range(0..(i as u64 * 4 + 1));
        let r = disagreement_entropy(votes(&counts));
        let h = entropy_bits(&counts);
        if (r.entropy.unwrap() - h).abs() > 1e-12 || r.band != Some(band_by_cuts(h)) {
            mismatched += 1;
        }
    }
    all(vec![
        check(
            unanimous == Some(0.0),
            format!("unanimous H = {unanimous:?}"),
        ),
        check(
            (uniform - 6f64.log2()).abs() < 1e-9,
            format!("uniform H = {uniform}"),
        ),
        check(
            mismatched == 0,
            format!("{mismatched}/100 banding mismatches"),
        ),
        within(Duration::from_secs(1), started),
    ])
}

// Criterion 2.

fn random_params(rng: &mut ChaCha8Rng, seed: u64) -> GeneratorParams {
    GeneratorParams {
        n_comments: rng.random_range(5..160),
        p_root: rng.random_range(0.0..1.0),
        p_root_decay: rng.random_range(0.0..0.6),
        attachment: if rng.random_bool(0.5) {
            Attachment::Preferential
        } else {
            Attachment::Uniform
        },
        p_revisit: rng.random_range(0.0..0.9),
        p_reply_back: rng.random_range(0.0..0.5),
        p_recent: rng.random_range(0.0..1.0),
        seed,
        ..GeneratorParams::aita_like()
    }
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut unequal, mut snapshots, mut largest) = (0, 0, 0);
    for seed in 0..100 {
        let t = threadgraph::generate_thread(&random_params(&mut rng, seed)).unwrap();
        let g = TemporalMultigraph::from_thread(&t);
        largest = largest.max(g.vertex_count());
        let cfg = TraceConfig::default();
        let exact = trace(&g, MetricMode::Exact, &cfg).unwrap();
        let oracle = trace(&g, MetricMode::Oracle, &cfg).unwrap();
        snapshots += oracle.samples.len();
        if exact.samples != oracle.samples {
            unequal += 1;
        }
    }
    all(vec![
        check(
            unequal == 0 && largest <= 200,
            format!(
                "{unequal}/100 traces differ over {snapshots} snapshots, max {largest} vertices"
            ),
        ),
        within(Duration::from_secs(60), started),
    ])
}

// Criterion 3.

fn criterion_3() -> Outcome {
    let p = GeneratorParams {
        n_comments: 300,
        p_root: 1.0,
        p_root_decay: 0.0,
        p_revisit: 0.0,
        p_reply_back: 0.0,
        ..GeneratorParams::aita_like()
    };
    let g = TemporalMultigraph::from_thread(&threadgraph::generate_thread(&p).unwrap());
    let tr = trace(&g, MetricMode::Exact, &TraceConfig::default()).unwrap();
    let bad = tr
        .samples
        .iter()
        .filter(|s| {
            let k = s.k as f64;
            s.gcc != 0.0
                || (s.k >= 2 && (s.aspl != Some(2.0 * k / (k + 1.0)) || s.diameter != Some(2)))
        })
        .count();
    check(
        bad == 0 && tr.samples.len() == 300,
        format!(
            "{bad} of {} steps off 2k/(k+1), GCC 0, D 2",
            tr.samples.len()
        ),
    )
}

// Criteria 4 and 5 share the AITA-like corpus.

fn criterion_4(graphs: &[TemporalMultigraph], n: usize) -> Outcome {
    let started = Instant::now();
    let (mut aspl, mut gcc) = (vec![0.0; n], vec![0.0; n]);
    let count = graphs.len() as f64;
    for g in graphs {
        let tr = trace(g, MetricMode::Exact, &TraceConfig::default()).unwrap();
        for s in &tr.samples {
            aspl[s.k - 1] += s.aspl.unwrap_or(0.0) / count;
            gcc[s.k - 1] += s.gcc / count;
        }
    }
    let start = n / 5;
    let a_bad: Vec<usize> = (start + 1..n)
        .filter(|&k| aspl[k] < aspl[k - 1])
        .map(|k| k + 1)
        .collect();
    let g_bad: Vec<usize> = (start + 1..n)
        .filter(|&k| gcc[k] > gcc[k - 1])
        .map(|k| k + 1)
        .collect();
    all(vec![
        check(
            a_bad.is_empty(),
            format!(
                "ASPL {:.3} -> {:.3}, decreasing steps {a_bad:?}",
                aspl[start],
                aspl[n - 1]
            ),
        ),
        check(
            g_bad.is_empty(),
            format!(
                "GCC {:.4} -> {:.4}, increasing steps {g_bad:?}",
                gcc[start],
                gcc[n - 1]
            ),
        ),
        within(Duration::from_secs(300), started),
    ])
}

/// Inverse-CDF sampling of the discrete power law with x_min = 1.
fn sample_power_law(gamma: f64, n: usize, seed: u64) -> Vec<u64> {
    let cap = 2_000_000usize;
    let z = hurwitz_zeta(gamma, 1.0);
    let mut acc = 0.0;
    let cdf: Vec<f64> = (1..=cap)
        .map(|x| {
            acc += (x as f64).powf(-gamma) / z;
            acc
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            (cdf.partition_point(|&c| c < u) + 1).min(cap) as u64
        })
        .collect()
}

fn criterion_5(graphs: &[TemporalMultigraph]) -> Outcome {
    let xs = sample_power_law(2.5, 10_000, 5);
    let fit = fit_power_law(&xs, &FitOptions::default()).unwrap();
    let mut sorted = xs.clone();
    sorted.sort_unstable();
    let ecdf = |x: u64| sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64;
    let self_ks = ks_distance(&sorted, ecdf);
    let good = graphs
        .iter()
        .filter_map(|g| {
            fit_power_law(&degree_sample(g, DegreeKind::Total), &FitOptions::default()).ok()
        })
        .filter(|f| f.p_value > 0.001 && f.ks < 0.35)
        .count();
    let share = good as f64 / graphs.len() as f64;
    all(vec![
        check(
            (fit.gamma - 2.5).abs() <= 0.1,
            format!("gamma {:.4} (xmin {})", fit.gamma, fit.x_min),
        ),
        check(self_ks == 0.0, format!("self-fit KS {self_ks}")),
        check(
            share >= 0.8,
            format!(
                "{good}/{} corpus fits with p > .001 and KS < .35",
                graphs.len()
            ),
        ),
    ])
}

// Criterion 6.

fn criterion_6(aita: &[TemporalMultigraph]) -> Outcome {
    let uniform: Vec<TemporalMultigraph> =
        generate_corpus(&[GeneratorParams::uniform()], 200, 10_000)
            .unwrap()
            .iter()
            .map(TemporalMultigraph::from_thread)
            .collect();
    let mut unconserved = 0;
    for g in aita.iter().chain(&uniform) {
        let star = g.edges.iter().filter(|e| e.is_star).count() as u64;
        for dm in [DeltaM::ONE, DeltaM::TEN, DeltaM::SIXTY] {
            let s = thread_speeds(g, dm, SpeedUnit::Edges);
            let minutes = dm.minutes() as f64;
            let float_sum = |p: &threadgraph::dynamics::SpeedProfile| {
                p.speeds().map(|v| v * minutes).sum::<f64>()
            };
            let periphery = g.edge_count() as u64 - star;
            if s.star.total() != star
                || s.periphery.total() != periphery
                || (float_sum(&s.star) - star as f64).abs() > 1e-9
                || (float_sum(&s.periphery) - periphery as f64).abs() > 1e-9
            {
                unconserved += 1;
            }
        }
    }
    let bins = |gs: &[TemporalMultigraph]| {
        let sp: Vec<_> = gs
            .iter()
            .map(|g| thread_speeds(g, DeltaM::TEN, SpeedUnit::Edges))
            .collect();
        bin_and_average(&sp, 10, BinMethod::EqualWidth).unwrap()
    };
    let (a, u) = (bins(aita), bins(&uniform));
    let in_range = a
        .ratios()
        .flatten()
        .filter(|r| (1.5..=4.0).contains(r))
        .count();
    let mut u_ratios: Vec<f64> = u.ratios().flatten().collect();
    u_ratios.sort_by(f64::total_cmp);
    let median = threadgraph::dynamics::quantile(&u_ratios, 0.5);
    let larger = a
        .ratios()
        .zip(u.ratios())
        .filter(|(x, y)| matches!((x, y), (Some(x), Some(y)) if x > y))
        .count();
    let fmt = |b: &threadgraph::dynamics::DurationBins| {
        b.ratios()
            .map(|r| r.map_or("-".into(), |r| format!("{r:.2}")))
            .collect::<Vec<String>>()
            .join(" ")
    };
    all(vec![
        check(
            unconserved == 0,
            format!("{unconserved} profiles break sum(S*dm) = edges"),
        ),
        check(
            in_range >= 7,
            format!("AITA-like ratios in [1.5, 4]: {in_range}/10 ({})", fmt(&a)),
        ),
        check(
            median < 1.5,
            format!("uniform median ratio {median:.2} ({})", fmt(&u)),
        ),
        check(larger >= 7, format!("AITA-like larger in {larger}/10 bins")),
    ])
}

// Criterion 7.

fn criterion_7() -> Outcome {
    let mut raw = vec![100i64; 10];
    raw.push(10_000);
    let cell = summarize(SubgraphTag::Periphery, VoteClass::Voting, raw);
    let corpus = generate_corpus(&[GeneratorParams::slow_voting()], 50, 7).unwrap();
    let (mut voting, mut other) = (Vec::new(), Vec::new());
    for g in corpus.iter().map(TemporalMultigraph::from_thread) {
        for e in g.edges.iter().filter(|e| !e.is_star) {
            let r = e.response_time() as f64;
            if e.label.is_voting_comment() {
                voting.push(r);
            } else {
                other.push(r);
            }
        }
    }
    let t = rank_sum_test(&voting, &other).unwrap();
    all(vec![
        check(
            cell.filtered_mean == Some(100.0),
            format!("filtered mean {:?}", cell.filtered_mean),
        ),
        check(
            t.p_value < 0.01,
            format!(
                "slow-voting periphery voting vs non-voting: p = {:.2e} (n = {}, {})",
                t.p_value,
                voting.len(),
                other.len()
            ),
        ),
    ])
}

// Criterion 8.

fn criterion_8(aita: &[TemporalMultigraph]) -> Outcome {
    let fractions = [0.2, 0.5, 0.9];
    let mut broken = 0;
    for g in aita.iter().take(50) {
        let simple = g.simple_directed();
        let degrees = |edges: &BTreeSet<(usize, usize)>| {
            let (mut out, mut inn) = (vec![0; g.vertex_count()], vec![0; g.vertex_count()]);
            for &(a, b) in edges {
                out[a] += 1;
                inn[b] += 1;
            }
            (out, inn)
        };
        for f in fractions {
            if degrees(&rewire(&simple, f, 8).unwrap().edges) != degrees(&simple) {
                broken += 1;
            }
        }
    }
    let seed = 0;
    let policy = VotePolicy::default();
    let features: Vec<ThreadFeatures> = generate_corpus(&coupled_params(400), 1, seed)
        .unwrap()
        .iter()
        .map(|t| {
            ThreadFeatures::extract(
                t,
                &TemporalMultigraph::from_thread(t),
                None,
                &policy,
                &fractions,
                seed,
            )
            .unwrap()
        })
        .collect();
    let report = correlation_report(&features, &Feature::all(&[20, 50, 90]));
    let rho = |f| report.row(f).and_then(|r| r.rho).unwrap_or(f64::NAN);
    let r = [20, 50, 90].map(|p| rho(Feature::RewiredReciprocity(p)));
    all(vec![
        check(
            broken == 0,
            format!("{broken} of 150 rewirings changed a degree sequence"),
        ),
        check(
            r[0] > r[1] && r[1] > r[2],
            format!(
                "rho(entropy, reciprocity) {:.3}; rewired 20/50/90%: {:.3} > {:.3} > {:.3}",
                rho(Feature::Reciprocity),
                r[0],
                r[1],
                r[2]
            ),
        ),
    ])
}

// Criterion 9.

fn brute_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let below = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn brute_pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn criterion_9() -> Outcome {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let up = spearman(&x, &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap().rho;
    let down = spearman(&x, &[9.0, 7.0, 5.0, 3.0, 1.0]).unwrap().rho;
    let fixture = spearman(&x, &[2.0, 1.0, 4.0, 3.0, 5.0])
        .unwrap()
        .rho
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let xs: Vec<f64> = (0..1000).map(|_| rng.random_range(0..25) as f64).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| (x / 4.0).floor() + rng.random_range(0..5) as f64)
        .collect();
    let rho = spearman(&xs, &ys).unwrap().rho.unwrap();
    let brute = brute_pearson(&brute_ranks(&xs), &brute_ranks(&ys));
    all(vec![
        check(up == Some(1.0) && down == Some(-1.0), format!("monotone rho {up:?} / {down:?}")),
        check(
            (fixture - 0.7).abs() < 1e-12,
            format!("5-point fixture rho = {fixture} (hand value from sum d^2 = 4 is 0.8; 0.7 is not attainable)"),
        ),
        check((fixture - 0.8).abs() < 1e-12, "5-point fixture equals the hand-ranked 0.8"),
        check(
            ranks(&xs) == brute_ranks(&xs) && (rho - brute).abs() < 1e-12,
            format!("1000 tied samples: rho {rho:.6} vs brute force {brute:.6}"),
        ),
    ])
}

// Criteria 10 and 11 drive the binary.

fn cli(args: &[&str]) -> bool {
    let out = Command::new(env!("CARGO_BIN_EXE_threadgraph"))
        .args(args)
        .env_remove("THREADGRAPH_OUT")
        .output()
        .expect("binary runs");
    if !out.status.success() {
        eprintln!(
            "threadgraph {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    out.status.success()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn criterion_10(tmp: &Path) -> Outcome {
    let (big, mid) = (tmp.join("big"), tmp.join("mid"));
    let made = cli(&[
        "generate",
        "--count",
        "1",
        "--gen",
        "n_comments=12000",
        "-o",
        s(&big),
    ]) && cli(&[
        "generate",
        "--count",
        "1",
        "--gen",
        "n_comments=2000",
        "-o",
        s(&mid),
    ]);
    let started = Instant::now();
    let landmark = cli(&[
        "analyze",
        s(&big),
        "--stride",
        "100",
        "--mode",
        "landmark",
        "--landmarks",
        "64",
        "--bins",
        "1",
        "-o",
        s(&tmp.join("big_out")),
    ]);
    let landmark_time = within(Duration::from_secs(60), started);
    let started = Instant::now();
    let exact = cli(&[
        "analyze",
        s(&mid),
        "--stride",
        "1",
        "--mode",
        "exact",
        "--vertex-cap",
        "8192",
        "--bins",
        "1",
        "-o",
        s(&tmp.join("mid_out")),
    ]);
    let exact_time = within(Duration::from_secs(120), started);
    let vertices = fs::read_to_string(tmp.join("mid_out/corpus/metrics_mean.csv"))
        .ok()
        .and_then(|t| t.lines().last().map(|l| l.to_string()))
        .unwrap_or_default();
    all(vec![
        check(
            made && landmark,
            "12000-comment thread, stride 100, landmark s=64",
        ),
        Outcome {
            detail: format!("landmark {}", landmark_time.detail),
            ..landmark_time
        },
        check(
            exact,
            format!("2000-comment thread, stride 1, exact (final row {vertices})"),
        ),
        Outcome {
            detail: format!("exact {}", exact_time.detail),
            ..exact_time
        },
    ])
}

fn criterion_11(tmp: &Path) -> Outcome {
    let store = tmp.join("det_store");
    let run = |out: &Path| {
        cli(&[
            "generate",
            "--presets",
            "aita-like,uniform",
            "--count",
            "20",
            "--seed",
            "11",
            "-o",
            s(&store),
        ]) && cli(&[
            "analyze",
            s(&store),
            "--stride",
            "3",
            "--bins",
            "5",
            "--seed",
            "11",
            "-o",
            s(out),
        ])
    };
    let (a, b) = (tmp.join("det_a"), tmp.join("det_b"));
    let ok = run(&a) && run(&b);
    let read = |d: &Path| fs::read(d.join("manifest.txt")).unwrap_or_default();
    let (ma, mb) = (read(&a), read(&b));
    let lines = String::from_utf8_lossy(&ma).lines().count();
    check(
        ok && !ma.is_empty() && ma == mb,
        format!(
            "two runs, manifests of {lines} files identical: {}",
            ma == mb
        ),
    )
}

fn main() {
    let tmp = TempDir::new().unwrap();
    let params = GeneratorParams::aita_like();
    let aita: Vec<TemporalMultigraph> = generate_corpus(std::slice::from_ref(&params), 200, 0)
        .unwrap()
        .iter()
        .map(TemporalMultigraph::from_thread)
        .collect();

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "entropy exactness", criterion_1()),
        (2, "oracle equivalence", criterion_2()),
        (3, "closed-form star trace", criterion_3()),
        (
            4,
            "qualitative metric evolution",
            criterion_4(&aita, params.n_comments),
        ),
        (5, "power-law recovery", criterion_5(&aita)),
        (6, "speed conservation and ratio", criterion_6(&aita)),
        (7, "response-time filter", criterion_7()),
        (8, "rewiring null model", criterion_8(&aita)),
        (9, "spearman correctness", criterion_9()),
        (10, "performance", criterion_10(tmp.path())),
        (11, "determinism", criterion_11(tmp.path())),
    ];

    let mut unexpected = Vec::new();
    for (n, name, o) in &results {
        println!(
            "criterion {n:>2} {}: {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass && !KNOWN_UNATTAINABLE.contains(n) {
            unexpected.push(*n);
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
