//! Filtered link-prediction ranking and multi-label interaction
//! classification, each paired with a brute-force oracle for small cases.

mod classification;
mod ranking;
mod report;

pub use classification::{
    ddi_classification, pr_auc, pr_auc_oracle, pr_curve, precision_at_k, roc_auc, roc_auc_oracle,
    roc_curve, ClassificationOutcome, PairDecision,
};
pub use ranking::{
    filtered_rank, link_prediction_metrics, link_prediction_ranks, rank_histogram, rank_oracle,
    summarize_ranks, RankResult,
};
pub use report::{ClassificationMetrics, LinkMetrics, MetricsReport, TaskMetrics};
