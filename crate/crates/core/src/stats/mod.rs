//! Disagreement entropy, reciprocity, power-law degree fits, rewiring null
//! models and rank correlations.

mod entropy;
mod features;
mod powerlaw;
mod rank;
mod reciprocity;
mod rewire;

pub use entropy::{disagreement_entropy, Band, DisagreementReport};
pub use features::{
    correlation_report, CorrelationReport, CorrelationRow, Feature, RowStatus, ThreadFeatures,
};
pub use powerlaw::{
    degree_sample, fit_power_law, hurwitz_zeta, kolmogorov_q, ks_distance, DegreeKind, FitOptions,
    PowerLawFit,
};
pub use rank::{rank_sum_test, ranks, spearman, Correlation, RankSumTest};
pub use reciprocity::reciprocity;
pub use rewire::{rewire, RewireOutcome};
