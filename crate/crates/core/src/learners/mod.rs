//! Naive Bayes, maximum entropy and linear SVM classifiers behind one
//! train/predict contract, plus a canonical on-disk model format.
//!
//! Predictions are deterministic: scores are compared with ties going to the
//! lowest class index, and training depends only on the data order, the
//! hyperparameters and the seed.

pub mod maxent;
pub mod naive_bayes;
pub mod svm;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSpace, FeatureVector};

pub const MODEL_MAGIC: &str = "SARKAS-MODEL";
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(rename = "nb")]
    NaiveBayes,
    #[serde(rename = "maxent")]
    MaxEnt,
    Svm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::NaiveBayes, Algorithm::MaxEnt, Algorithm::Svm];

    pub fn code(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "nb",
            Algorithm::MaxEnt => "maxent",
            Algorithm::Svm => "svm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "Naive Bayes",
            Algorithm::MaxEnt => "Maximum Entropy",
            Algorithm::Svm => "Support Vector Machine",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nb" => Ok(Algorithm::NaiveBayes),
            "maxent" => Ok(Algorithm::MaxEnt),
            "svm" => Ok(Algorithm::Svm),
            other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Laplace smoothing for Naive Bayes.
    pub nb_alpha: f64,
    /// L2 penalty on MaxEnt weights (biases are not penalized).
    pub maxent_lambda: f64,
    pub maxent_max_iter: usize,
    /// Stop when the relative objective change falls below this.
    pub maxent_tol: f64,
    pub svm_lambda: f64,
    pub svm_epochs: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            nb_alpha: 1.0,
            maxent_lambda: 1e-3,
            maxent_max_iter: 500,
            maxent_tol: 1e-8,
            svm_lambda: 1e-2,
            svm_epochs: 50,
        }
    }
}

/// Labeled vectors sharing one feature space.
#[derive(Debug, Clone)]
pub struct Dataset {
    space: FeatureSpace,
    classes: Vec<String>,
    vectors: Vec<FeatureVector>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(
        space: FeatureSpace,
        classes: Vec<String>,
        vectors: Vec<FeatureVector>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::Config(format!(
                "{} vectors but {} labels",
                vectors.len(),
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= classes.len()) {
            return Err(Error::Config(format!(
                "label {bad} outside class set of size {}",
                classes.len()
            )));
        }
        for v in &vectors {
            if v.dim() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: v.dim(),
                });
            }
            if v.space_fingerprint() != space.fingerprint() {
                return Err(Error::SpaceMismatch);
            }
        }
        Ok(Dataset {
            space,
            classes,
            vectors,
            labels,
        })
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    fn validate_for_training(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = vec![false; self.classes.len()];
        for &l in &self.labels {
            seen[l] = true;
        }
        let present = seen.iter().filter(|&&s| s).count();
        if present < 2 {
            return Err(Error::TooFewClasses(present));
        }
        for (d, v) in self.vectors.iter().enumerate() {
            if let Some(&(column, _)) = v.entries().iter().find(|(_, x)| !x.is_finite()) {
                return Err(Error::NonFinite { doc: d, column });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Params {
    NaiveBayes(naive_bayes::NaiveBayesParams),
    MaxEnt(maxent::MaxEntParams),
    Svm(svm::SvmParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    format_version: u32,
    algorithm: Algorithm,
    classes: Vec<String>,
    feature_space: FeatureSpace,
    params: Params,
}

pub fn train(data: &Dataset, algorithm: Algorithm, hp: &Hyperparams, seed: u64) -> Result<Model> {
    data.validate_for_training()?;
    let params = match algorithm {
        Algorithm::NaiveBayes => Params::NaiveBayes(naive_bayes::fit(data, hp.nb_alpha)?),
        Algorithm::MaxEnt => Params::MaxEnt(maxent::fit(data, hp)?.0),
        Algorithm::Svm => Params::Svm(svm::fit(data, hp, seed)?),
    };
    Ok(Model {
        format_version: MODEL_FORMAT_VERSION,
        algorithm,
        classes: data.classes.clone(),
        feature_space: data.space.clone(),
        params,
    })
}

/// Index of the largest score; the lowest index wins ties.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

impl Model {
    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn feature_space(&self) -> &FeatureSpace {
        &self.feature_space
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    fn check_space(&self, v: &FeatureVector) -> Result<()> {
        if v.space_fingerprint() != self.feature_space.fingerprint()
            || v.dim() != self.feature_space.dim()
        {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// Raw per-class scores: log joint (NB), logits (MaxEnt) or margins (SVM).
    pub fn scores(&self, v: &FeatureVector) -> Result<Vec<f64>> {
        self.check_space(v)?;
        Ok(match &self.params {
            Params::NaiveBayes(p) => p.log_joint(v),
            Params::MaxEnt(p) => p.logits(v),
            Params::Svm(p) => p.margins(v),
        })
    }

    pub fn predict(&self, v: &FeatureVector) -> Result<usize> {
        Ok(argmax(&self.scores(v)?))
    }

    /// Class distribution. For the SVM this is a softmax over raw margins and
    /// is not calibrated.
    pub fn predict_dist(&self, v: &FeatureVector) -> Result<Vec<f64>> {
        Ok(softmax(&self.scores(v)?))
    }

    /// Magic line followed by canonical JSON; equal models give equal bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("{MODEL_MAGIC} {}\n", self.format_version).into_bytes();
        out.extend(serde_json::to_vec_pretty(self).expect("models serialize"));
        out.push(b'\n');
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Model> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Corrupt(e.to_string()))?;
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| Error::Corrupt("missing header line".into()))?;
        let version = parse_header(header, MODEL_MAGIC)?;
        let model: Model = serde_json::from_str(body).map_err(|e| Error::Corrupt(e.to_string()))?;
        if model.format_version != version {
            return Err(Error::VersionMismatch {
                found: model.format_version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let k = self.classes.len();
        let d = self.feature_space.dim();
        let ok = match (&self.params, self.algorithm) {
            (Params::NaiveBayes(p), Algorithm::NaiveBayes) => p.has_shape(k, d),
            (Params::MaxEnt(p), Algorithm::MaxEnt) => p.has_shape(k, d),
            (Params::Svm(p), Algorithm::Svm) => p.has_shape(k, d),
            _ => false,
        };
        if !ok {
            return Err(Error::Corrupt(format!(
                "parameters do not match algorithm {} with {k} classes and {d} features",
                self.algorithm
            )));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Model> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Model::from_bytes(&bytes)
    }
}

/// Parses `"<magic> <version>"`, rejecting any version but the current one.
pub(crate) fn parse_header(header: &str, magic: &str) -> Result<u32> {
    let rest = header
        .strip_prefix(magic)
        .ok_or_else(|| Error::Corrupt(format!("missing {magic} header")))?;
    let found: u32 = rest
        .trim()
        .parse()
        .map_err(|_| Error::Corrupt(format!("bad format version '{}'", rest.trim())))?;
    if found != MODEL_FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found,
            expected: MODEL_FORMAT_VERSION,
        });
    }
    Ok(found)
}

pub fn save_model(model: &Model, path: &Path) -> Result<()> {
    model.save(path)
}

pub fn load_model(path: &Path) -> Result<Model> {
    Model::load(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{FeatureGroups, FeatureMode};

    pub(crate) fn space(dim: usize) -> FeatureSpace {
        FeatureSpace::new(
            FeatureMode::Lexical,
            FeatureGroups::UNIGRAM,
            (0..dim).map(|i| format!("f{i}")),
        )
    }

    fn two_doc() -> Dataset {
        let s = space(2);
        let vectors = vec![s.vector([(0, 1.0)]).unwrap(), s.vector([(1, 1.0)]).unwrap()];
        Dataset::new(s, vec!["A".into(), "B".into()], vectors, vec![0, 1]).unwrap()
    }

    #[test]
    fn single_class_is_rejected() {
        let s = space(2);
        let vectors = vec![s.vector([(0, 1.0)]).unwrap(), s.vector([(1, 1.0)]).unwrap()];
        let d = Dataset::new(s, vec!["A".into(), "B".into()], vectors, vec![0, 0]).unwrap();
        for alg in Algorithm::ALL {
            assert!(matches!(
                train(&d, alg, &Hyperparams::default(), 1),
                Err(Error::TooFewClasses(1))
            ));
        }
    }

    #[test]
    fn empty_and_non_finite_are_rejected() {
        let s = space(2);
        let d = Dataset::new(s.clone(), vec!["A".into(), "B".into()], vec![], vec![]).unwrap();
        assert!(matches!(
            train(&d, Algorithm::MaxEnt, &Hyperparams::default(), 1),
            Err(Error::EmptyDataset)
        ));

        let vectors = vec![
            s.vector([(0, f64::NAN)]).unwrap(),
            s.vector([(1, 1.0)]).unwrap(),
        ];
        let d = Dataset::new(s, vec!["A".into(), "B".into()], vectors, vec![0, 1]).unwrap();
        assert!(matches!(
            train(&d, Algorithm::Svm, &Hyperparams::default(), 1),
            Err(Error::NonFinite { doc: 0, column: 0 })
        ));
    }

    #[test]
    fn dataset_rejects_foreign_vectors() {
        let s = space(2);
        let other = space(3);
        let v = other.vector([(0, 1.0)]).unwrap();
        assert!(Dataset::new(s, vec!["A".into()], vec![v], vec![0]).is_err());
    }

    #[test]
    fn predict_rejects_space_mismatch() {
        let m = train(
            &two_doc(),
            Algorithm::NaiveBayes,
            &Hyperparams::default(),
            1,
        )
        .unwrap();
        let v = space(3).vector([(0, 1.0)]).unwrap();
        assert!(matches!(m.predict(&v), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn separable_memorization() {
        let d = two_doc();
        for alg in Algorithm::ALL {
            let m = train(&d, alg, &Hyperparams::default(), 7).unwrap();
            for (v, &l) in d.vectors().iter().zip(d.labels()) {
                assert_eq!(m.predict(v).unwrap(), l, "{alg}");
            }
            let dist = m.predict_dist(&d.vectors()[0]).unwrap();
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn model_bytes_round_trip() {
        let d = two_doc();
        for alg in Algorithm::ALL {
            let m = train(&d, alg, &Hyperparams::default(), 3).unwrap();
            let bytes = m.to_bytes();
            assert!(bytes.starts_with(b"SARKAS-MODEL 1\n"));
            assert_eq!(bytes, m.to_bytes());
            let back = Model::from_bytes(&bytes).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_bytes(), bytes);
        }
    }

    #[test]
    fn bumped_version_is_rejected() {
        let m = train(&two_doc(), Algorithm::MaxEnt, &Hyperparams::default(), 3).unwrap();
        let text = String::from_utf8(m.to_bytes()).unwrap();
        let bumped = text.replacen("SARKAS-MODEL 1", "SARKAS-MODEL 2", 1);
        match Model::from_bytes(bumped.as_bytes()) {
            Err(Error::VersionMismatch {
                found: 2,
                expected: 1,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let bumped = text.replacen("\"format_version\": 1", "\"format_version\": 9", 1);
        assert!(matches!(
            Model::from_bytes(bumped.as_bytes()),
            Err(Error::VersionMismatch { found: 9, .. })
        ));
        assert!(matches!(
            Model::from_bytes(b"garbage"),
            Err(Error::Corrupt(_))
        ));
        assert!(matches!(
            Model::from_bytes(b"SARKAS-MODEL 1\n{\"x\": 1}"),
            Err(Error::Corrupt(_))
        ));
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[1.0, 1.0, 0.5]), 0);
        assert_eq!(argmax(&[0.0, 2.0, 2.0]), 1);
    }
}
