//! Multinomial logistic regression trained by full-batch gradient descent
//! with a backtracking (Armijo) line search.
//!
//! Objective: mean negative log-likelihood + `λ/2 ‖W‖²`; biases are not penalized.
//! Parameters are handled as one flat vector: the `k × d` weight matrix in row
//! order followed by the `k` biases.

use serde::{Deserialize, Serialize};

use super::{softmax, Dataset, Hyperparams};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEntParams {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl MaxEntParams {
    pub fn zeros(k: usize, d: usize) -> Self {
        MaxEntParams {
            weights: vec![vec![0.0; d]; k],
            bias: vec![0.0; k],
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat: Vec<f64> = self.weights.iter().flatten().copied().collect();
        flat.extend(&self.bias);
        flat
    }

    pub fn from_flat(flat: &[f64], k: usize, d: usize) -> Self {
        assert_eq!(flat.len(), k * (d + 1));
        MaxEntParams {
            weights: (0..k).map(|c| flat[c * d..(c + 1) * d].to_vec()).collect(),
            bias: flat[k * d..].to_vec(),
        }
    }

    pub fn logits(&self, v: &FeatureVector) -> Vec<f64> {
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

fn logits_flat(flat: &[f64], k: usize, d: usize, v: &FeatureVector) -> Vec<f64> {
    (0..k)
        .map(|c| v.dot(&flat[c * d..(c + 1) * d]) + flat[k * d + c])
        .collect()
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + z.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Objective value at `flat`.
pub fn objective(data: &Dataset, flat: &[f64], lambda: f64) -> f64 {
    let (k, d) = (data.num_classes(), data.dim());
    let nll: f64 = data
        .vectors()
        .iter()
        .zip(data.labels())
        .map(|(v, &y)| {
            let z = logits_flat(flat, k, d, v);
            log_sum_exp(&z) - z[y]
        })
        .sum();
    let reg: f64 = flat[..k * d].iter().map(|w| w * w).sum();
    nll / data.len() as f64 + 0.5 * lambda * reg
}

/// Objective value and its analytic gradient at `flat`.
pub fn objective_and_gradient(data: &Dataset, flat: &[f64], lambda: f64) -> (f64, Vec<f64>) {
    let (k, d) = (data.num_classes(), data.dim());
    let n = data.len() as f64;
    let mut grad = vec![0.0; flat.len()];
    let mut nll = 0.0;
    for (v, &y) in data.vectors().iter().zip(data.labels()) {
        let z = logits_flat(flat, k, d, v);
        nll += log_sum_exp(&z) - z[y];
        let p = softmax(&z);
        for c in 0..k {
            let r = p[c] - if c == y { 1.0 } else { 0.0 };
            for &(j, x) in v.entries() {
                grad[c * d + j] += r * x;
            }
            grad[k * d + c] += r;
        }
    }
    for g in grad.iter_mut() {
        *g /= n;
    }
    let mut reg = 0.0;
    for (g, w) in grad[..k * d].iter_mut().zip(&flat[..k * d]) {
        *g += lambda * w;
        reg += w * w;
    }
    (nll / n + 0.5 * lambda * reg, grad)
}

/// Trains from zero initialization. Also returns the objective after every
/// accepted step (first element: the starting objective).
pub fn fit(data: &Dataset, hp: &Hyperparams) -> Result<(MaxEntParams, Vec<f64>)> {
    let lambda = hp.maxent_lambda;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!(
            "maxent lambda must be >= 0, got {lambda}"
        )));
    }
    let (k, d) = (data.num_classes(), data.dim());
    let mut flat = vec![0.0; k * (d + 1)];
    let (mut f, mut g) = objective_and_gradient(data, &flat, lambda);
    let mut trace = vec![f];
    let mut step = 1.0;

    for _ in 0..hp.maxent_max_iter {
        let gnorm2: f64 = g.iter().map(|x| x * x).sum();
        if gnorm2 == 0.0 {
            break;
        }
        let mut accepted = None;
        while step >= MIN_STEP {
            let candidate: Vec<f64> = flat.iter().zip(&g).map(|(w, gi)| w - step * gi).collect();
            let fc = objective(data, &candidate, lambda);
            if fc <= f - ARMIJO_C * step * gnorm2 {
                accepted = Some((candidate, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((candidate, fc)) = accepted else {
            break;
        };
        let rel = (f - fc).abs() / f.abs().max(f64::MIN_POSITIVE);
        flat = candidate;
        let (f_new, g_new) = objective_and_gradient(data, &flat, lambda);
        f = f_new;
        g = g_new;
        trace.push(f);
        if rel < hp.maxent_tol {
            break;
        }
        step *= 2.0;
    }
    Ok((MaxEntParams::from_flat(&flat, k, d), trace))
}
