use std::fmt;

use crate::ingest::JudgmentLabel;

/// Entropy bands with cut points 0.65, 1.3 and 1.95 bits. A value on a cut
/// point belongs to the band above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    Low,
    MediumLow,
    MediumHigh,
    High,
}

impl Band {
    pub const CUTS: [f64; 3] = [0.65, 1.3, 1.95];

    pub fn of(h: f64) -> Band {
        match h {
            h if h < Self::CUTS[0] => Band::Low,
            h if h < Self::CUTS[1] => Band::MediumLow,
            h if h < Self::CUTS[2] => Band::MediumHigh,
            _ => Band::High,
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Low => "low",
            Band::MediumLow => "medium-low",
            Band::MediumHigh => "medium-high",
            Band::High => "high",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisagreementReport {
    /// Counts in [`JudgmentLabel::VOTING`] order.
    pub counts: [u64; 6],
    pub probabilities: Option<[f64; 6]>,
    /// Shannon entropy in bits; absent without votes.
    pub entropy: Option<f64>,
    pub band: Option<Band>,
}

impl DisagreementReport {
    pub fn votes(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl fmt::Display for DisagreementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, c) in JudgmentLabel::VOTING.iter().zip(self.counts) {
            writeln!(f, "{l} = {c}")?;
        }
        writeln!(f, "votes = {}", self.votes())?;
        match (self.entropy, self.band) {
            (Some(h), Some(b)) => writeln!(f, "entropy_bits = {h}\nband = {b}"),
            _ => writeln!(f, "entropy_bits =\nband ="),
        }
    }
}

/// Entropy of the six voting labels; unsure and non-voting comments are ignored.
pub fn disagreement_entropy(labels: impl IntoIterator<Item = JudgmentLabel>) -> DisagreementReport {
    let mut counts = [0u64; 6];
    for l in labels {
        if let Some(i) = l.vote_index() {
            counts[i] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return DisagreementReport {
            counts,
            probabilities: None,
            entropy: None,
            band: None,
        };
    }
    let p = counts.map(|c| c as f64 / total as f64);
    let h = -p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>();
    // Unanimity gives -0.0; report it as 0.
    let h = h.max(0.0);
    DisagreementReport {
        counts,
        probabilities: Some(p),
        entropy: Some(h),
        band: Some(Band::of(h)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use JudgmentLabel::*;

    fn of_counts(c: [u64; 6]) -> DisagreementReport {
        disagreement_entropy(
            JudgmentLabel::VOTING
                .iter()
                .zip(c)
                .flat_map(|(&l, n)| std::iter::repeat_n(l, n as usize)),
        )
    }

    #[test]
    fn unanimity() {
        let r = disagreement_entropy([Nta, Nta, Nta]);
        assert_eq!(r.entropy, Some(0.0));
        assert_eq!(r.band, Some(Band::Low));
    }

    #[test]
    fn uniform_is_log2_six() {
        let r = of_counts([7; 6]);
        assert!((r.entropy.unwrap() - 6f64.log2()).abs() < 1e-9);
        assert_eq!(r.band, Some(Band::High));
    }

    #[test]
    fn three_to_one() {
        let r = disagreement_entropy([Nta, Nta, Nta, Yta]);
        assert!((r.entropy.unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert_eq!(r.band, Some(Band::MediumLow));
    }

    #[test]
    fn no_votes_no_entropy() {
        let r = disagreement_entropy([None, Unsure, None]);
        assert_eq!(r.entropy, Option::None);
        assert_eq!(r.band, Option::None);
        assert_eq!(r.votes(), 0);
    }

    #[test]
    fn unsure_is_excluded() {
        assert_eq!(
            disagreement_entropy([Nta, Unsure, Yta]).entropy,
            disagreement_entropy([Nta, Yta]).entropy
        );
    }

    #[test]
    fn band_cut_points() {
        assert_eq!(Band::of(0.0), Band::Low);
        assert_eq!(Band::of(0.649_999), Band::Low);
        assert_eq!(Band::of(0.65), Band::MediumLow);
        assert_eq!(Band::of(1.3), Band::MediumHigh);
        assert_eq!(Band::of(1.95), Band::High);
        assert_eq!(Band::of(2.585), Band::High);
    }

    proptest! {
        #[test]
        fn bounded_and_permutation_invariant(c in prop::array::uniform6(0u64..40), rot in 0usize..6) {
            let r = of_counts(c);
            let mut rotated = c;
            rotated.rotate_left(rot);
            let s = of_counts(rotated);
            match (r.entropy, s.entropy) {
                (Some(a), Some(b)) => {
                    prop_assert!((0.0..=6f64.log2() + 1e-12).contains(&a));
                    prop_assert!((a - b).abs() < 1e-12);
                    let sum: f64 = r.probabilities.unwrap().iter().sum();
                    prop_assert!((sum - 1.0).abs() < 1e-12);
                }
                (a, b) => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn maximal_only_when_uniform(c in prop::array::uniform6(1u64..30)) {
            let h = of_counts(c).entropy.unwrap();
            let uniform = c.iter().all(|&x| x == c[0]);
            prop_assert_eq!((h - 6f64.log2()).abs() < 1e-12, uniform);
        }
    }
}
