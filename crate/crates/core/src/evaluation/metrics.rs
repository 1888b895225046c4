use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Sentiment};
use crate::error::{Error, Result};
use crate::learners::{Dataset, Model};
use crate::pipeline::Pipeline;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Confusion matrix (rows gold, columns predicted) and the scores derived
/// from it. Precision, recall and F1 are 0 when their denominator is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub classes: Vec<String>,
    pub confusion: Vec<Vec<u64>>,
    pub total: u64,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Metrics {
    pub fn from_confusion(classes: Vec<String>, confusion: Vec<Vec<u64>>) -> Result<Self> {
        let k = classes.len();
        if confusion.len() != k || confusion.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: confusion.len(),
            });
        }
        let total: u64 = confusion.iter().flatten().sum();
        let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
        let per_class = (0..k)
            .map(|c| {
                let tp = confusion[c][c];
                let support: u64 = confusion[c].iter().sum();
                let predicted: u64 = confusion.iter().map(|r| r[c]).sum();
                let precision = ratio(tp, predicted);
                let recall = ratio(tp, support);
                let f1 = if precision + recall == 0.0 {
                    0.0
                } else {
                    2.0 * precision * recall / (precision + recall)
                };
                ClassMetrics {
                    class: classes[c].clone(),
                    precision,
                    recall,
                    f1,
                    support,
                }
            })
            .collect();
        Ok(Metrics {
            classes,
            confusion,
            total,
            accuracy: ratio(correct, total),
            per_class,
        })
    }

    /// Tallies `(gold, predicted)` class-index pairs.
    pub fn from_pairs(
        classes: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let k = classes.len();
        let mut confusion = vec![vec![0u64; k]; k];
        for (gold, pred) in pairs {
            if gold >= k || pred >= k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: gold.max(pred) + 1,
                });
            }
            confusion[gold][pred] += 1;
        }
        Self::from_confusion(classes, confusion)
    }

    pub fn correct(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.confusion[i][i]).sum()
    }

    pub fn macro_f1(&self) -> f64 {
        if self.per_class.is_empty() {
            return 0.0;
        }
        self.per_class.iter().map(|c| c.f1).sum::<f64>() / self.per_class.len() as f64
    }
}

pub fn sentiment_classes() -> Vec<String> {
    Sentiment::ALL
        .iter()
        .map(|s| s.code().to_string())
        .collect()
}

/// Final labels of `pipeline` against each document's resolved gold label
/// (a sarcastic positive counts as negative).
pub fn evaluate(pipeline: &Pipeline, test: &[Document]) -> Result<Metrics> {
    let mut pairs = Vec::with_capacity(test.len());
    for (i, doc) in test.iter().enumerate() {
        let gold = gold_label(doc, i)?;
        let pred = pipeline.classify_document(doc)?;
        pairs.push((gold.index(), pred.final_label.index()));
    }
    Metrics::from_pairs(sentiment_classes(), pairs)
}

/// Stage-1 sentiment against the plain gold sentiment.
pub fn evaluate_sentiment(pipeline: &Pipeline, test: &[Document]) -> Result<Metrics> {
    let mut pairs = Vec::with_capacity(test.len());
    for (i, doc) in test.iter().enumerate() {
        let gold = doc.sentiment.ok_or(Error::MissingField {
            doc: i,
            field: "sentiment",
        })?;
        let tokens = pipeline.normalize(&doc.text);
        let (pred, _) = pipeline.classify_stage1(&tokens, doc.topic.as_deref())?;
        pairs.push((gold.index(), pred.index()));
    }
    Metrics::from_pairs(sentiment_classes(), pairs)
}

/// A single model on an already vectorized dataset.
pub fn evaluate_model(model: &Model, data: &Dataset) -> Result<Metrics> {
    if model.feature_space() != data.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut pairs = Vec::with_capacity(data.len());
    for (v, &gold) in data.vectors().iter().zip(data.labels()) {
        pairs.push((gold, model.predict(v)?));
    }
    Metrics::from_pairs(model.classes().to_vec(), pairs)
}

fn gold_label(doc: &Document, i: usize) -> Result<Sentiment> {
    let missing = |field| Error::MissingField { doc: i, field };
    let s = doc.sentiment.ok_or(missing("sentiment"))?;
    if s == Sentiment::Positive && doc.sarcasm.is_none() {
        return Err(missing("sarcasm"));
    }
    Ok(doc.resolved_label().expect("sentiment present"))
}
