//! Multinomial Naive Bayes over nonnegative (possibly fractional) feature masses.

use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesParams {
    pub alpha: f64,
    /// Class priors; sum to 1.
    pub priors: Vec<f64>,
    /// `ln P(feature | class)`, one row per class.
    pub feature_log_probs: Vec<Vec<f64>>,
}

pub fn fit(data: &Dataset, alpha: f64) -> Result<NaiveBayesParams> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Config(format!(
            "smoothing alpha must be positive, got {alpha}"
        )));
    }
    let k = data.num_classes();
    let d = data.dim();
    let mut class_docs = vec![0usize; k];
    let mut mass = vec![vec![0.0f64; d]; k];
    for (doc, (v, &label)) in data.vectors().iter().zip(data.labels()).enumerate() {
        class_docs[label] += 1;
        for &(j, x) in v.entries() {
            if x < 0.0 {
                return Err(Error::Config(format!(
                    "naive bayes needs nonnegative features; document {doc} column {j} is {x}"
                )));
            }
            mass[label][j] += x;
        }
    }
    let n = data.len() as f64;
    let priors = class_docs.iter().map(|&c| c as f64 / n).collect();
    let feature_log_probs = mass
        .into_iter()
        .map(|row| {
            let total: f64 = row.iter().sum::<f64>() + alpha * d as f64;
            row.into_iter()
                .map(|m| ((m + alpha) / total).ln())
                .collect()
        })
        .collect();
    Ok(NaiveBayesParams {
        alpha,
        priors,
        feature_log_probs,
    })
}

impl NaiveBayesParams {
    /// `ln P(class) + Σ x_j ln P(j | class)`; `-inf` for classes without training documents.
    pub fn log_joint(&self, v: &FeatureVector) -> Vec<f64> {
        self.priors
            .iter()
            .zip(&self.feature_log_probs)
            .map(|(&prior, row)| {
                if prior == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    prior.ln() + v.dot(row)
                }
            })
            .collect()
    }

    pub(super) fn has_shape(&self, k: usize, d: usize) -> bool {
        self.priors.len() == k
            && self.feature_log_probs.len() == k
            && self.feature_log_probs.iter().all(|r| r.len() == d)
    }
}
