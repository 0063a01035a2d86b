use std::fmt;
use std::str::FromStr;

/// Judgment expressed by a single comment.
///
/// The six voting labels are the community acronyms; `Unsure` marks a body
/// carrying two or more distinct voting acronyms and `None` a comment that
/// discusses without voting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JudgmentLabel {
    Yta,
    Ywbta,
    Nta,
    Ywnbta,
    Esh,
    Nah,
    Unsure,
    None,
}

impl JudgmentLabel {
    pub const VOTING: [JudgmentLabel; 6] = [
        JudgmentLabel::Yta,
        JudgmentLabel::Ywbta,
        JudgmentLabel::Nta,
        JudgmentLabel::Ywnbta,
        JudgmentLabel::Esh,
        JudgmentLabel::Nah,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            JudgmentLabel::Yta => "YTA",
            JudgmentLabel::Ywbta => "YWBTA",
            JudgmentLabel::Nta => "NTA",
            JudgmentLabel::Ywnbta => "YWNBTA",
            JudgmentLabel::Esh => "ESH",
            JudgmentLabel::Nah => "NAH",
            JudgmentLabel::Unsure => "UNSURE",
            JudgmentLabel::None => "NONE",
        }
    }

    /// One of the six acronyms that count towards disagreement entropy.
    pub fn is_vote(self) -> bool {
        self.vote_index().is_some()
    }

    /// Whether the comment contains at least one voting acronym (so `Unsure` counts).
    pub fn is_voting_comment(self) -> bool {
        self != JudgmentLabel::None
    }

    /// Position within [`JudgmentLabel::VOTING`].
    pub fn vote_index(self) -> Option<usize> {
        JudgmentLabel::VOTING.iter().position(|&l| l == self)
    }
}

impl fmt::Display for JudgmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLabel(pub String);

impl fmt::Display for UnknownLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown judgment label {:?}", self.0)
    }
}

impl std::error::Error for UnknownLabel {}

impl FromStr for JudgmentLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        [
            JudgmentLabel::Yta,
            JudgmentLabel::Ywbta,
            JudgmentLabel::Nta,
            JudgmentLabel::Ywnbta,
            JudgmentLabel::Esh,
            JudgmentLabel::Nah,
            JudgmentLabel::Unsure,
            JudgmentLabel::None,
        ]
        .into_iter()
        .find(|l| l.as_str() == upper)
        .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

/// Classifies a comment body.
///
/// The body is split on non-alphanumeric characters and every whole token is
/// compared case-insensitively with the six voting acronyms. `INFO` is not a
/// vote and is ignored. Zero matches give `None`, a single distinct acronym
/// (possibly repeated) gives that label, anything more gives `Unsure`.
pub fn extract_judgment(body: &str) -> JudgmentLabel {
    let mut found: Option<JudgmentLabel> = None;
    for token in body.split(|c: char| !c.is_alphanumeric()) {
        if token.is_empty() || token.len() > 6 {
            continue;
        }
        let Some(label) = JudgmentLabel::VOTING
            .iter()
            .copied()
            .find(|l| token.eq_ignore_ascii_case(l.as_str()))
        else {
            continue;
        };
        match found {
            None => found = Some(label),
            Some(prev) if prev == label => {}
            Some(_) => return JudgmentLabel::Unsure,
        }
    }
    found.unwrap_or(JudgmentLabel::None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_acronym() {
        assert_eq!(
            extract_judgment("NTA, she was out of line"),
            JudgmentLabel::Nta
        );
        assert_eq!(extract_judgment("totally yta."), JudgmentLabel::Yta);
        assert_eq!(extract_judgment("NTA NTA nta!!"), JudgmentLabel::Nta);
        assert_eq!(extract_judgment("I think... ywnbta"), JudgmentLabel::Ywnbta);
    }

    #[test]
    fn multiple_distinct_acronyms_are_unsure() {
        assert_eq!(
            extract_judgment("honestly YTA but also kinda NTA"),
            JudgmentLabel::Unsure
        );
        assert_eq!(extract_judgment("ESH/NAH"), JudgmentLabel::Unsure);
    }

    #[test]
    fn info_is_ignored() {
        assert_eq!(
            extract_judgment("INFO: how old is she?"),
            JudgmentLabel::None
        );
        assert_eq!(extract_judgment("info but NAH"), JudgmentLabel::Nah);
    }

    #[test]
    fn substrings_do_not_match() {
        assert_eq!(extract_judgment("ynta lol"), JudgmentLabel::None);
        assert_eq!(
            extract_judgment("NTAs everywhere, NAHH"),
            JudgmentLabel::None
        );
        assert_eq!(extract_judgment(""), JudgmentLabel::None);
    }

    #[test]
    fn label_text_round_trips() {
        for l in JudgmentLabel::VOTING
            .into_iter()
            .chain([JudgmentLabel::Unsure, JudgmentLabel::None])
        {
            assert_eq!(l.as_str().parse::<JudgmentLabel>().unwrap(), l);
        }
        assert!("INFO".parse::<JudgmentLabel>().is_err());
    }

    proptest! {
        #[test]
        fn case_insensitive(body in "[ a-zA-Z,.!ÄéßŁ]{0,60}") {
            let base = extract_judgment(&body);
            prop_assert_eq!(extract_judgment(&body.to_uppercase()), base);
            prop_assert_eq!(extract_judgment(&body.to_lowercase()), base);
        }

        #[test]
        fn idempotent_through_label_text(body in "(NTA|YTA|ESH|nah|info|word|, )*") {
            let label = extract_judgment(&body);
            if label.is_vote() {
                prop_assert_eq!(extract_judgment(label.as_str()), label);
            }
        }
    }
}
