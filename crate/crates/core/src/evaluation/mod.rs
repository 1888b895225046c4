//! Metrics, stratified splitting, the synthetic corpus generator and the
//! comparative experiments.

pub mod experiments;
pub mod metrics;
pub mod report;
pub mod split;
pub mod synthetic;

pub use experiments::{
    experiment_method, experiment_sarcasm, experiment_sentiment_score, ExperimentConfig,
};
pub use metrics::{evaluate, evaluate_model, evaluate_sentiment, ClassMetrics, Metrics};
pub use report::{ExperimentReport, ReportRow, ReportSection};
pub use split::{split, split_indices};
pub use synthetic::{
    generate_synthetic_corpus, generate_with, CorpusSpec, GeneratedCorpus, TopicSpec,
};
