use std::collections::BTreeSet;

use crate::graph::VertexId;

/// Share of directed edges whose reverse is also present; 0 without edges.
/// Self-loops are ignored.
pub fn reciprocity(edges: &BTreeSet<(VertexId, VertexId)>) -> f64 {
    let (mut total, mut mutual) = (0usize, 0usize);
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        total += 1;
        if edges.contains(&(b, a)) {
            mutual += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        mutual as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(pairs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn examples() {
        assert_eq!(reciprocity(&set(&[(0, 1), (1, 0)])), 1.0);
        assert_eq!(reciprocity(&set(&[(0, 1)])), 0.0);
        assert_eq!(reciprocity(&set(&[(0, 1), (1, 0), (0, 2), (2, 3)])), 0.5);
        assert_eq!(reciprocity(&set(&[])), 0.0);
    }

    proptest! {
        #[test]
        fn invariant_under_reversal_and_relabeling(pairs in prop::collection::vec((0usize..15, 0usize..15), 0..60), shift in 1usize..100) {
            let g: BTreeSet<_> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
            let r = reciprocity(&g);
            let reversed: BTreeSet<_> = g.iter().map(|&(a, b)| (b, a)).collect();
            let relabeled: BTreeSet<_> = g.iter().map(|&(a, b)| ((a * 7 + shift) % 101, (b * 7 + shift) % 101)).collect();
            prop_assert_eq!(r, reciprocity(&reversed));
            prop_assert_eq!(r, reciprocity(&relabeled));
        }
    }
}
