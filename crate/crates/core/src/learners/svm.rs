//! One-vs-rest linear SVM trained with Pegasos stochastic subgradient steps.
//!
//! The bias is learned as the weight of an implicit constant feature and is
//! regularized together with the other weights. After each step the iterate
//! is projected onto the ball of radius `1/√λ`, which contains the optimum.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Dataset, Hyperparams};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// One weight vector per class (that class vs the rest).
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl SvmParams {
    pub fn margins(&self, v: &FeatureVector) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| v.dot(w) + b)
            .collect()
    }

    pub(super) fn has_shape(&self, k: usize, d: usize) -> bool {
        self.bias.len() == k && self.weights.len() == k && self.weights.iter().all(|w| w.len() == d)
    }
}

pub fn fit(data: &Dataset, hp: &Hyperparams, seed: u64) -> Result<SvmParams> {
    let lambda = hp.svm_lambda;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!(
            "svm lambda must be positive, got {lambda}"
        )));
    }
    let k = data.num_classes();
    let mut weights = Vec::with_capacity(k);
    let mut bias = Vec::with_capacity(k);
    for class in 0..k {
        let targets: Vec<f64> = data
            .labels()
            .iter()
            .map(|&l| if l == class { 1.0 } else { -1.0 })
            .collect();
        let (w, b) = pegasos(data, &targets, lambda, hp.svm_epochs, seed, class);
        weights.push(w);
        bias.push(b);
    }
    Ok(SvmParams { weights, bias })
}

fn pegasos(
    data: &Dataset,
    targets: &[f64],
    lambda: f64,
    epochs: usize,
    seed: u64,
    class: usize,
) -> (Vec<f64>, f64) {
    let mut rng = seed::rng(seed, &format!("svm/class-{class}"));
    let d = data.dim();
    let radius = 1.0 / lambda.sqrt();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut t = 0usize;

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let v = &data.vectors()[i];
            let y = targets[i];
            let margin = y * (v.dot(&w) + b);

            let shrink = 1.0 - eta * lambda;
            w.iter_mut().for_each(|x| *x *= shrink);
            b *= shrink;
            if margin < 1.0 {
                for &(j, x) in v.entries() {
                    w[j] += eta * y * x;
                }
                b += eta * y;
            }

            let norm = (w.iter().map(|x| x * x).sum::<f64>() + b * b).sqrt();
            if norm > radius {
                let s = radius / norm;
                w.iter_mut().for_each(|x| *x *= s);
                b *= s;
            }
        }
    }
    (w, b)
}
