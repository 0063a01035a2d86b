//! Seeded synthetic thread corpora.
//!
//! Comments arrive one at a time, in time order, an exponential gap after
//! the previous one (whole seconds, at least one). The gap mean depends on
//! whether the comment answers the post and is scaled for voting comments.
//!
//! A comment answers the post with a probability that falls linearly over
//! the thread around its mean `p_root`. Deeper comments answer either the
//! latest comment posted one response delay earlier or an earlier comment
//! chosen uniformly or by replies received. The author is the one the
//! target itself replied to (`p_reply_back`), a returning user with a
//! probability that halves every `revisit_half_life` comments, or a new
//! user.
//!
//! Every thread is produced from one `ChaCha8Rng` seeded with the thread
//! seed; corpus thread `i` uses `seed + i`.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;
use rayon::prelude::*;

use crate::config::KvConfig;
use crate::ingest::{JudgmentLabel, RawMessage, ThreadRecord};
use crate::{Error, Result};

/// How non-root targets are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    Uniform,
    /// Weight 1 + replies already received.
    Preferential,
}

impl fmt::Display for Attachment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attachment::Uniform => "uniform",
            Attachment::Preferential => "preferential",
        })
    }
}

impl FromStr for Attachment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Attachment::Uniform),
            "preferential" | "degree-preferential" => Ok(Attachment::Preferential),
            _ => Err(Error::Config(format!("unknown attachment {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub n_comments: usize,
    /// Mean probability of answering the post over the thread.
    pub p_root: f64,
    /// Drop in that probability from the first comment to the last. The
    /// line is centred on `p_root` and clamped to [0, 1].
    pub p_root_decay: f64,
    pub attachment: Attachment,
    pub p_vote_star: f64,
    pub p_vote_periphery: f64,
    /// Weights over YTA, YWBTA, NTA, YWNBTA, ESH, NAH.
    pub label_weights: [f64; 6],
    /// Mean inter-arrival gap in seconds before a first-level comment.
    pub mean_gap_star: f64,
    /// Mean inter-arrival gap in seconds before a deeper comment.
    pub mean_gap_periphery: f64,
    pub p_revisit: f64,
    /// Comments after which the returning-user probability has halved.
    pub revisit_half_life: f64,
    /// Probability that a deeper comment answers the latest comment posted
    /// one response delay earlier instead of an attachment-chosen one.
    pub p_recent: f64,
    /// Probability that a reply to a comment comes from the author that comment answered.
    pub p_reply_back: f64,
    /// Multiplier on the gap before a voting comment.
    pub vote_gap_factor: f64,
    /// Probability that a voting comment names two different judgments.
    pub p_unsure: f64,
    pub seed: u64,
}

pub const PRESETS: [&str; 3] = ["aita-like", "slow-voting", "uniform"];

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams::aita_like()
    }
}

impl GeneratorParams {
    /// Star-heavy threads with votes concentrated in first-level comments.
    pub fn aita_like() -> Self {
        GeneratorParams {
            n_comments: 300,
            p_root: 0.7,
            p_root_decay: 0.5,
            attachment: Attachment::Preferential,
            p_vote_star: 0.8,
            p_vote_periphery: 0.3,
            label_weights: [0.25, 0.03, 0.55, 0.05, 0.06, 0.06],
            mean_gap_star: 120.0,
            mean_gap_periphery: 240.0,
            p_revisit: 0.7,
            revisit_half_life: 20.0,
            p_recent: 0.5,
            p_reply_back: 0.1,
            vote_gap_factor: 1.5,
            p_unsure: 0.05,
            seed: 0,
        }
    }

    /// AITA-like, with voting comments arriving three times slower and most
    /// deeper comments answering recent ones.
    pub fn slow_voting() -> Self {
        GeneratorParams {
            vote_gap_factor: 3.0,
            p_recent: 0.8,
            ..Self::aita_like()
        }
    }

    /// Replies spread evenly over earlier comments, few of them to the post.
    pub fn uniform() -> Self {
        GeneratorParams {
            n_comments: 300,
            p_root: 0.2,
            p_root_decay: 0.0,
            attachment: Attachment::Uniform,
            p_vote_star: 0.5,
            p_vote_periphery: 0.5,
            label_weights: [1.0; 6],
            mean_gap_star: 180.0,
            mean_gap_periphery: 180.0,
            p_revisit: 0.35,
            revisit_half_life: f64::INFINITY,
            p_recent: 0.0,
            p_reply_back: 0.0,
            vote_gap_factor: 1.0,
            p_unsure: 0.05,
            seed: 0,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "aita-like" => Ok(Self::aita_like()),
            "slow-voting" => Ok(Self::slow_voting()),
            "uniform" => Ok(Self::uniform()),
            _ => Err(Error::Config(format!(
                "unknown generator preset {name:?} (known: {})",
                PRESETS.join(", ")
            ))),
        }
    }

    /// Overrides fields from `gen.*` keys of a config file.
    pub fn apply_config(mut self, cfg: &KvConfig) -> Result<Self> {
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = cfg.parsed(concat!("gen.", stringify!($field)))? {
                    self.$field = v;
                }
            };
        }
        take!(n_comments);
        take!(p_root);
        take!(p_root_decay);
        take!(attachment);
        take!(p_vote_star);
        take!(p_vote_periphery);
        take!(mean_gap_star);
        take!(mean_gap_periphery);
        take!(p_revisit);
        take!(revisit_half_life);
        take!(p_recent);
        take!(p_reply_back);
        take!(vote_gap_factor);
        take!(p_unsure);
        take!(seed);
        if let Some(w) = cfg.list::<f64>("gen.label_weights")? {
            self.label_weights = w.try_into().map_err(|w: Vec<f64>| {
                Error::Config(format!("gen.label_weights needs 6 values, got {}", w.len()))
            })?;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.n_comments < 2 {
            return bad(format!(
                "n_comments must be at least 2, got {}",
                self.n_comments
            ));
        }
        for (name, p) in [
            ("p_root", self.p_root),
            ("p_vote_star", self.p_vote_star),
            ("p_vote_periphery", self.p_vote_periphery),
            ("p_revisit", self.p_revisit),
            ("p_recent", self.p_recent),
            ("p_reply_back", self.p_reply_back),
            ("p_unsure", self.p_unsure),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if !self.p_root_decay.is_finite() {
            return bad(format!(
                "p_root_decay must be finite, got {}",
                self.p_root_decay
            ));
        }
        if self
            .label_weights
            .iter()
            .any(|w| !w.is_finite() || *w < 0.0)
        {
            return bad("label weights must be finite and non-negative".into());
        }
        if self.label_weights.iter().sum::<f64>() <= 0.0 {
            return bad("label weights are all zero".into());
        }
        for (name, m) in [
            ("mean_gap_star", self.mean_gap_star),
            ("mean_gap_periphery", self.mean_gap_periphery),
            ("vote_gap_factor", self.vote_gap_factor),
        ] {
            if !m.is_finite() || m <= 0.0 {
                return bad(format!("{name} must be positive, got {m}"));
            }
        }
        if self.revisit_half_life.is_nan() || self.revisit_half_life <= 0.0 {
            return bad(format!(
                "revisit_half_life must be positive, got {}",
                self.revisit_half_life
            ));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorParams {
            seed,
            ..self.clone()
        }
    }
}

const FILLER: [&str; 24] = [
    "honestly",
    "the",
    "situation",
    "sounds",
    "rough",
    "you",
    "she",
    "he",
    "they",
    "were",
    "kind",
    "of",
    "out",
    "of",
    "line",
    "but",
    "family",
    "money",
    "wedding",
    "just",
    "talk",
    "it",
    "over",
    "edit",
];

const BASE_TIME: i64 = 1_500_000_000;

struct Draft {
    parent: Option<usize>,
    author: usize,
    t: i64,
    depth: u32,
    body: String,
    score: i64,
}

fn body(rng: &mut ChaCha8Rng, acronyms: &[&str]) -> String {
    let n = rng.random_range(3..30);
    let mut words: Vec<&str> = (0..n)
        .map(|_| FILLER[rng.random_range(0..FILLER.len())])
        .collect();
    for a in acronyms {
        let at = rng.random_range(0..=words.len());
        words.insert(at, a);
    }
    words.join(" ")
}

/// Generates one thread; the same params always yield the same record.
pub fn generate_thread(params: &GeneratorParams) -> Result<ThreadRecord> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let thread_id = format!("g{:016x}", params.seed);
    let labels = WeightedIndex::new(params.label_weights)
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    let star_gap =
        Exp::new(1.0 / params.mean_gap_star).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let periph_gap = Exp::new(1.0 / params.mean_gap_periphery)
        .map_err(|e| Error::InvalidParams(e.to_string()))?;

    let t0 = BASE_TIME + rng.random_range(0..365 * 86_400);
    // Index 0 is the post; its author is user 0.
    let mut drafts = vec![Draft {
        parent: None,
        author: 0,
        t: t0,
        depth: 0,
        body: body(&mut rng, &[]),
        score: 0,
    }];
    let mut users = 1usize;
    let mut urn: Vec<usize> = Vec::new();
    let mut top: Vec<usize> = Vec::new();

    let last = (params.n_comments - 1) as f64;
    for _ in 0..params.n_comments {
        let comments = drafts.len() - 1;
        let age = 0.5 - comments as f64 / last;
        let p_root = params.p_root + params.p_root_decay * age;
        let p_revisit = params.p_revisit * (-(comments as f64) / params.revisit_half_life).exp2();
        let star = comments == 0 || rng.random_bool(p_root.clamp(0.0, 1.0));
        let p_vote = if star {
            params.p_vote_star
        } else {
            params.p_vote_periphery
        };
        let vote = rng.random_bool(p_vote).then(|| {
            let first = JudgmentLabel::VOTING[labels.sample(&mut rng)];
            let second = rng.random_bool(params.p_unsure).then(|| {
                let second = JudgmentLabel::VOTING[rng.random_range(0..6)];
                if second == first {
                    JudgmentLabel::VOTING[(first.vote_index().unwrap_or(0) + 1) % 6]
                } else {
                    second
                }
            });
            (first, second)
        });
        let slow = if vote.is_some() {
            params.vote_gap_factor
        } else {
            1.0
        };

        let gap = slow
            * if star {
                star_gap.sample(&mut rng)
            } else {
                periph_gap.sample(&mut rng)
            };
        let t = drafts[drafts.len() - 1].t + (gap.ceil() as i64).max(1);

        let parent = if star {
            0
        } else if rng.random_bool(params.p_recent) {
            // The latest comment posted at least one response delay ago.
            let delay = slow * periph_gap.sample(&mut rng);
            let cutoff = t - delay.ceil() as i64;
            let i = drafts[1..].partition_point(|d| d.t <= cutoff);
            i.max(1)
        } else {
            match params.attachment {
                Attachment::Uniform => rng.random_range(1..=comments),
                Attachment::Preferential => urn[rng.random_range(0..urn.len())],
            }
        };
        let target = &drafts[parent];
        let target_author = target.author;

        let grandparent_author = target.parent.map(|g| drafts[g].author);
        let author = match grandparent_author {
            Some(g) if g != target_author && rng.random_bool(params.p_reply_back) => g,
            _ if users > 1 && rng.random_bool(p_revisit) => {
                // Top-level comments come back from earlier top-level
                // commenters; the post author answers only through replies back.
                let a = if star && !top.is_empty() {
                    top[rng.random_range(0..top.len())]
                } else {
                    rng.random_range(1..users)
                };
                if a == target_author {
                    users += 1;
                    users - 1
                } else {
                    a
                }
            }
            _ => {
                users += 1;
                users - 1
            }
        };

        let depth = target.depth + 1;
        if star && !top.contains(&author) {
            top.push(author);
        }
        let text = match vote {
            Some((first, Some(second))) => body(&mut rng, &[first.as_str(), second.as_str()]),
            Some((first, None)) => body(&mut rng, &[first.as_str()]),
            None => body(&mut rng, &[]),
        };
        let score = rng.random_range(-5i64..50);

        if params.attachment == Attachment::Preferential && parent != 0 {
            urn.push(parent);
        }
        urn.push(drafts.len());
        drafts.push(Draft {
            parent: Some(parent),
            author,
            t,
            depth,
            body: text,
            score,
        });
    }

    let id = |i: usize| {
        if i == 0 {
            thread_id.clone()
        } else {
            format!("{thread_id}c{i:06}")
        }
    };
    let messages = drafts
        .iter()
        .enumerate()
        .map(|(i, d)| RawMessage {
            id: id(i),
            parent_id: d.parent.map(id),
            thread_id: thread_id.clone(),
            author: Some(format!("u{:05}", d.author)),
            created_at: d.t,
            body: d.body.clone(),
            score: Some(d.score),
            sentiment: None,
        })
        .collect();
    let record = ThreadRecord::build(&thread_id, messages)?;
    record.validate()?;
    Ok(record)
}

/// Params for a corpus in which one hidden dial per thread moves several
/// quantities together. Thread `i` of `count` sits at `u = i / (count - 1)`:
/// its vote labels spread from all-NTA towards uniform, replies back to
/// the previous speaker rise from 0.05 to 0.65 and voting becomes rarer.
/// Threads are deep, 150-comment conversations.
pub fn coupled_params(count: usize) -> Vec<GeneratorParams> {
    (0..count)
        .map(|i| {
            let u = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let mut label_weights = [u; 6];
            label_weights[2] += 1.0 - u;
            GeneratorParams {
                n_comments: 150,
                p_root: 0.05,
                p_root_decay: 0.0,
                attachment: Attachment::Uniform,
                label_weights,
                p_reply_back: 0.05 + 0.6 * u,
                p_vote_star: 0.9 - 0.5 * u,
                p_vote_periphery: 0.5 - 0.3 * u,
                ..GeneratorParams::aita_like()
            }
        })
        .collect()
}

/// Generates `count` threads per params entry. Thread `i` (counted across
/// the whole list) is seeded with `seed + i`; output order follows `i`.
pub fn generate_corpus(
    params: &[GeneratorParams],
    count: usize,
    seed: u64,
) -> Result<Vec<ThreadRecord>> {
    for p in params {
        p.validate()?;
    }
    let jobs: Vec<GeneratorParams> = params
        .iter()
        .flat_map(|p| std::iter::repeat_n(p, count))
        .enumerate()
        .map(|(i, p)| p.with_seed(seed.wrapping_add(i as u64)))
        .collect();
    jobs.par_iter().map(generate_thread).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalMultigraph;
    use crate::ingest::serialize_thread;

    fn params(n: usize, p_root: f64, seed: u64) -> GeneratorParams {
        GeneratorParams {
            n_comments: n,
            p_root,
            seed,
            ..GeneratorParams::aita_like()
        }
    }

    #[test]
    fn pure_star_when_p_root_is_one() {
        let t = generate_thread(&GeneratorParams {
            p_root_decay: 0.0,
            ..params(200, 1.0, 3)
        })
        .unwrap();
        assert_eq!(t.comments.len(), 200);
        assert!(t.comments.iter().all(|c| c.depth == 1));
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = serialize_thread(&generate_thread(&params(300, 0.6, 11)).unwrap());
        let b = serialize_thread(&generate_thread(&params(300, 0.6, 11)).unwrap());
        assert_eq!(a, b);
        let c = serialize_thread(&generate_thread(&params(300, 0.6, 12)).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn depth_one_fraction_tracks_p_root() {
        // Binomial(1000, 0.6) has sd ~0.0155; [0.55, 0.65] is beyond 3 sd.
        for seed in 0..20 {
            let t = generate_thread(&params(1000, 0.6, seed)).unwrap();
            let star = t.comments.iter().filter(|c| c.depth == 1).count() as f64 / 1000.0;
            assert!((0.55..=0.65).contains(&star), "seed {seed}: {star}");
        }
    }

    #[test]
    fn root_share_falls_over_the_thread() {
        let p = GeneratorParams {
            p_root_decay: 0.6,
            ..params(2000, 0.6, 4)
        };
        let t = generate_thread(&p).unwrap();
        let share = |cs: &[crate::ingest::Comment]| {
            cs.iter().filter(|c| c.depth == 1).count() as f64 / cs.len() as f64
        };
        // Expected 0.825 over the first quarter and 0.375 over the last.
        assert!(share(&t.comments[..500]) > 0.75);
        assert!(share(&t.comments[1500..]) < 0.45);
    }

    #[test]
    fn coupled_params_span_the_dial() {
        let ps = coupled_params(5);
        assert_eq!(ps.len(), 5);
        assert_eq!(ps[0].label_weights, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(ps[4].label_weights, [1.0; 6]);
        assert!(ps
            .windows(2)
            .all(|w| w[0].p_reply_back < w[1].p_reply_back && w[0].p_vote_star > w[1].p_vote_star));
        assert!(ps.iter().all(|p| p.validate().is_ok()));
    }

    #[test]
    fn timestamps_strictly_increase() {
        let t = generate_thread(&params(500, 0.5, 1)).unwrap();
        assert!(t
            .comments
            .windows(2)
            .all(|w| w[0].message.created_at < w[1].message.created_at));
        assert!(t.comments[0].message.created_at > t.root.created_at);
    }

    #[test]
    fn uniform_depth_histogram_is_monotone() {
        let p = GeneratorParams {
            n_comments: 20_000,
            p_root: 0.5,
            attachment: Attachment::Uniform,
            seed: 5,
            ..GeneratorParams::uniform()
        };
        let t = generate_thread(&p).unwrap();
        let max = t.comments.iter().map(|c| c.depth).max().unwrap() as usize;
        let mut hist = vec![0f64; max + 1];
        for c in &t.comments {
            hist[c.depth as usize] += 1.0;
        }
        // One-sided sign test per adjacent pair: is depth d+1 significantly
        // more common than depth d? Normal approximation, alpha 0.01.
        for d in 1..max {
            let (a, b) = (hist[d], hist[d + 1]);
            let n = a + b;
            if n < 20.0 {
                continue;
            }
            let z = (b - n / 2.0) / (n / 4.0).sqrt();
            assert!(
                z < 2.326,
                "depth {} count {b} exceeds depth {d} count {a}",
                d + 1
            );
        }
    }

    #[test]
    fn most_users_join_in_the_star() {
        let p = GeneratorParams {
            p_reply_back: 0.0,
            ..params(400, 0.6, 0)
        };
        let corpus = generate_corpus(&[p], 10, 100).unwrap();
        let (mut star, mut total) = (0usize, 0usize);
        for t in &corpus {
            let g = TemporalMultigraph::from_thread(t);
            for joined in g.joined_in_star().into_iter().flatten() {
                total += 1;
                star += joined as usize;
            }
        }
        let share = star as f64 / total as f64;
        assert!((0.5..=0.7).contains(&share), "star share {share}");
    }

    #[test]
    fn corpus_threads_are_distinct() {
        let a = generate_corpus(&[GeneratorParams::aita_like()], 3, 0).unwrap();
        assert_eq!(a.len(), 3);
        assert_ne!(a[0].comments, a[1].comments);
        let b = generate_corpus(&[GeneratorParams::aita_like()], 3, 3).unwrap();
        for x in &a {
            assert!(b
                .iter()
                .all(|y| y.thread_id != x.thread_id && y.comments != x.comments));
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate_thread(&params(1, 0.5, 0)).is_err());
        assert!(generate_thread(&params(10, 1.5, 0)).is_err());
        let zero = GeneratorParams {
            label_weights: [0.0; 6],
            ..GeneratorParams::aita_like()
        };
        assert!(matches!(
            generate_thread(&zero),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn config_overrides() {
        let cfg = KvConfig::parse(
            "gen.p_root = 0.4\ngen.attachment = uniform\ngen.label_weights = 1,1,1,1,1,1\n",
        )
        .unwrap();
        let p = GeneratorParams::aita_like().apply_config(&cfg).unwrap();
        assert_eq!(p.p_root, 0.4);
        assert_eq!(p.attachment, Attachment::Uniform);
        assert_eq!(p.label_weights, [1.0; 6]);
        assert!(GeneratorParams::preset("nope").is_err());
    }
}
