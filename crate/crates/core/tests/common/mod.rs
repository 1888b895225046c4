//! Oracles and random problem generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sarkas::learners::maxent;
use sarkas::{Dataset, FeatureGroups, FeatureMode, FeatureSpace, Model};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(dim: usize) -> FeatureSpace {
    FeatureSpace::new(
        FeatureMode::Lexical,
        FeatureGroups::UNIGRAM,
        (0..dim).map(|i| format!("f{i}")),
    )
}

pub fn class_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("c{i}")).collect()
}

/// Dense rows and labels wrapped into a dataset.
pub fn dataset(rows: &[(Vec<f64>, usize)], k: usize) -> Dataset {
    let d = rows.first().map_or(0, |r| r.0.len());
    let s = space(d);
    let vectors = rows
        .iter()
        .map(|(x, _)| s.vector(x.iter().copied().enumerate()).unwrap())
        .collect();
    Dataset::new(
        s,
        class_names(k),
        vectors,
        rows.iter().map(|r| r.1).collect(),
    )
    .unwrap()
}

/// Random rows with labels covering at least two classes.
pub fn random_rows(
    rng: &mut ChaCha8Rng,
    max_docs: usize,
    max_features: usize,
    max_classes: usize,
    nonnegative: bool,
) -> (Vec<(Vec<f64>, usize)>, usize) {
    let k = rng.random_range(2..=max_classes);
    let d = rng.random_range(1..=max_features);
    let n = rng.random_range(2..=max_docs);
    let lo = if nonnegative { 0.0 } else { -2.0 };
    loop {
        let rows: Vec<(Vec<f64>, usize)> = (0..n)
            .map(|_| {
                let x = (0..d)
                    .map(|_| {
                        if rng.random_bool(0.3) {
                            0.0
                        } else {
                            rng.random_range(lo..2.0)
                        }
                    })
                    .collect();
                (x, rng.random_range(0..k))
            })
            .collect();
        let mut seen: Vec<usize> = rows.iter().map(|r| r.1).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() >= 2 {
            return (rows, k);
        }
    }
}

/// Posterior by Bayes rule, computed with explicit products of smoothed
/// likelihoods raised to the feature masses.
pub fn nb_oracle(rows: &[(Vec<f64>, usize)], k: usize, alpha: f64, x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let n = rows.len() as f64;
    let mut joint = vec![0.0; k];
    for (c, slot) in joint.iter_mut().enumerate() {
        let members: Vec<&Vec<f64>> = rows.iter().filter(|r| r.1 == c).map(|r| &r.0).collect();
        let mut counts = vec![0.0; d];
        for f in &members {
            for j in 0..d {
                counts[j] += f[j];
            }
        }
        let total: f64 = counts.iter().sum::<f64>() + alpha * d as f64;
        let mut p = members.len() as f64 / n;
        for j in 0..d {
            p *= ((counts[j] + alpha) / total).powf(x[j]);
        }
        *slot = p;
    }
    let z: f64 = joint.iter().sum();
    joint.into_iter().map(|p| p / z).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖analytic − numeric‖ / max(‖analytic‖, ‖numeric‖)` with central differences.
pub fn gradient_relative_error(data: &Dataset, point: &[f64], lambda: f64) -> f64 {
    let h = 1e-5;
    let (_, analytic) = maxent::objective_and_gradient(data, point, lambda);
    let mut numeric = vec![0.0; point.len()];
    let mut p = point.to_vec();
    for i in 0..p.len() {
        let orig = p[i];
        p[i] = orig + h;
        let up = maxent::objective(data, &p, lambda);
        p[i] = orig - h;
        let down = maxent::objective(data, &p, lambda);
        p[i] = orig;
        numeric[i] = (up - down) / (2.0 * h);
    }
    let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(a, b)| a - b).collect();
    norm(&diff) / norm(&analytic).max(norm(&numeric)).max(1e-12)
}

/// Up to 20 points in [-1, 1]² labeled by a random line, none closer than
/// `margin` to it; both classes present.
pub fn separable_rows(rng: &mut ChaCha8Rng, n: usize, margin: f64) -> Vec<(Vec<f64>, usize)> {
    loop {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (wx, wy) = (theta.cos(), theta.sin());
        let b: f64 = rng.random_range(-0.5..0.5);
        let mut rows = Vec::with_capacity(n);
        while rows.len() < n {
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random_range(-1.0..1.0);
            let side = wx * x + wy * y + b;
            if side.abs() >= margin {
                rows.push((vec![x, y], usize::from(side > 0.0)));
            }
        }
        let ones = rows.iter().filter(|r| r.1 == 1).count();
        if ones > 0 && ones < n {
            return rows;
        }
    }
}

pub fn training_accuracy(model: &Model, data: &Dataset) -> f64 {
    let correct = data
        .vectors()
        .iter()
        .zip(data.labels())
        .filter(|(v, &l)| model.predict(v).unwrap() == l)
        .count();
    correct as f64 / data.len() as f64
}

const GARBAGE: &[&str] = &[
    "!!!",
    "??",
    ":)",
    ":p",
    "123",
    "4ku",
    "x",
    "...",
    "#hashtag",
    "@user",
    "http://t.co/x",
];

/// Random short texts mixing corpus vocabulary, slang spellings and junk.
pub fn random_texts(rng: &mut ChaCha8Rng, n: usize) -> Vec<(String, Option<String>)> {
    let spec = sarkas::evaluation::CorpusSpec::default();
    let vocab = sarkas::evaluation::synthetic::vocabulary(&spec);
    let aux = sarkas::AuxLists::bundled();
    let slang: Vec<&str> = aux.informal_dict.keys().map(String::as_str).collect();
    let mut topics: Vec<Option<String>> =
        spec.topics.iter().map(|t| Some(t.name.clone())).collect();
    topics.push(None);
    topics.push(Some("topik-baru".into()));
    (0..n)
        .map(|_| {
            let len = rng.random_range(0..12);
            let words: Vec<String> = (0..len)
                .map(|_| match rng.random_range(0..10) {
                    0 => slang.choose(rng).unwrap().to_string(),
                    1 => GARBAGE.choose(rng).unwrap().to_string(),
                    2 => vocab.choose(rng).unwrap().to_uppercase(),
                    _ => vocab.choose(rng).unwrap().to_string(),
                })
                .collect();
            (words.join(" "), topics.choose(rng).unwrap().clone())
        })
        .collect()
}
