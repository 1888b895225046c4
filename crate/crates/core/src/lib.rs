//! Sentiment analysis for Indonesian social-media text with a second-stage
//! sarcasm detector.
//!
//! The flow is: [`normalizer`] cleans slang and noisy spelling, [`features`]
//! turns tokens into lexicon-scored vectors (plus topic negativity,
//! interjection count and a question-word flag), [`learners`] provides Naive
//! Bayes, maximum entropy and linear SVM classifiers, and [`pipeline`] chains
//! a 3-class sentiment stage with a sarcasm stage that runs on positive texts
//! only. [`evaluation`] holds metrics, a synthetic corpus generator and the
//! comparative experiment harnesses.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod learners;
pub mod lexicon;
pub mod normalizer;
pub mod pipeline;
pub mod seed;

pub use corpus::{Document, Sentiment};
pub use error::{Error, Result};
pub use features::{FeatureGroups, FeatureMode, FeatureSpace, FeatureVector};
pub use learners::{Algorithm, Dataset, Hyperparams, Model};
pub use lexicon::{AuxLists, SentimentLexicon};
pub use normalizer::TokenSeq;
pub use pipeline::{Pipeline, PipelineConfig, Prediction, Stage1Method};
