//! Two-step classification: a sentiment stage (direct 3-class, or leveled
//! neutral-vs-opinion then positive-vs-negative) followed by a sarcasm stage
//! that only runs on texts the sentiment stage calls positive.
//!
//! A positive text judged sarcastic is reported with `final_label` negative;
//! the raw stage outputs stay available on the [`Prediction`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Sentiment};
use crate::error::{Error, Result};
use crate::features::{
    compute_negativity, FeatureConfig, FeatureExtractor, FeatureGroups, FeatureMode, FeatureSpace,
    FeatureVector, TopicNegativityRegistry,
};
use crate::learners::{
    self, parse_header, Algorithm, Dataset, Hyperparams, Model, MODEL_FORMAT_VERSION,
};
use crate::lexicon::{load_aux_lists, load_lexicon, AuxLists, AuxPaths, SentimentLexicon};
use crate::normalizer::{normalize_with, NormalizerConfig, TokenSeq};
use crate::seed;

pub const BUNDLE_MAGIC: &str = "SARKAS-BUNDLE";

pub const SENTIMENT_STAGE: &str = "sentiment";
pub const GATE_STAGE: &str = "opinion_gate";
pub const POLARITY_STAGE: &str = "polarity";
pub const SARCASM_STAGE: &str = "sarcasm";

const GATE_CLASSES: [&str; 2] = ["neutral", "opinion"];
const POLARITY_CLASSES: [&str; 2] = ["pos", "neg"];
const SARCASM_CLASSES: [&str; 2] = ["not_sarcastic", "sarcastic"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage1Method {
    Direct,
    Leveled,
}

impl fmt::Display for Stage1Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage1Method::Direct => "direct",
            Stage1Method::Leveled => "leveled",
        })
    }
}

impl FromStr for Stage1Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Stage1Method::Direct),
            "leveled" => Ok(Stage1Method::Leveled),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub stage1_method: Stage1Method,
    pub stage1_algorithm: Algorithm,
    pub stage2_algorithm: Algorithm,
    pub feature_mode: FeatureMode,
    pub stage1_groups: FeatureGroups,
    pub stage2_groups: FeatureGroups,
    pub features: FeatureConfig,
    pub normalizer: NormalizerConfig,
    pub hyperparams: Hyperparams,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stage1_method: Stage1Method::Direct,
            stage1_algorithm: Algorithm::NaiveBayes,
            stage2_algorithm: Algorithm::NaiveBayes,
            feature_mode: FeatureMode::Score,
            stage1_groups: FeatureGroups::SENTIMENT,
            stage2_groups: FeatureGroups::SARCASM,
            features: FeatureConfig::default(),
            normalizer: NormalizerConfig::default(),
            hyperparams: Hyperparams::default(),
            seed: seed::DEFAULT_SEED,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.stage2_groups.unigram {
            return Err(Error::Config(
                "sarcasm stage features must include unigrams".into(),
            ));
        }
        if self.normalizer.vowel_run_threshold < 2 {
            return Err(Error::Config(
                "vowel run threshold must be at least 2".into(),
            ));
        }
        Ok(())
    }

    fn uses_negativity(&self) -> bool {
        self.stage1_groups.negativity || self.stage2_groups.negativity
    }
}

/// Class distribution reported by one stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageScores {
    pub stage: String,
    pub scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub sentiment: Sentiment,
    /// Present exactly when `sentiment` is positive.
    pub sarcasm: Option<bool>,
    pub final_label: Sentiment,
    pub stage_scores: Vec<StageScores>,
}

impl Prediction {
    pub fn stage(&self, name: &str) -> Option<&StageScores> {
        self.stage_scores.iter().find(|s| s.stage == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Stage1Models {
    Direct(Model),
    Leveled { gate: Model, polarity: Model },
}

/// Training-set sizes per class, per stage model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingCounts {
    pub sentiment: Option<Vec<usize>>,
    pub opinion_gate: Option<Vec<usize>>,
    pub polarity: Option<Vec<usize>>,
    pub sarcasm: Vec<usize>,
}

impl TrainingCounts {
    pub fn total(counts: &Option<Vec<usize>>) -> usize {
        counts.as_ref().map(|c| c.iter().sum()).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    config: PipelineConfig,
    lexicon: SentimentLexicon,
    aux: AuxLists,
    registry: TopicNegativityRegistry,
    stage1: Stage1Models,
    sarcasm: Model,
    counts: TrainingCounts,
}

fn class_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn count_labels(labels: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &l in labels {
        c[l] += 1;
    }
    c
}

fn build_dataset(
    fx: &FeatureExtractor<'_>,
    space: &FeatureSpace,
    registry: &TopicNegativityRegistry,
    classes: Vec<String>,
    rows: &[(&Document, &TokenSeq, usize)],
) -> Result<Dataset> {
    let mut vectors = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for (doc, tokens, label) in rows {
        vectors.push(fx.vectorize(doc.topic.as_deref(), tokens, space, registry)?);
        labels.push(*label);
    }
    Dataset::new(space.clone(), classes, vectors, labels)
}

/// Trains both stages on `docs`.
///
/// Every document needs a sentiment label and every positive document a
/// sarcasm label. When any stage uses the negativity feature, every document
/// also needs a topic; the negativity registry is computed from `docs`.
pub fn train_pipeline(
    docs: &[Document],
    lexicon: &SentimentLexicon,
    aux: &AuxLists,
    config: &PipelineConfig,
) -> Result<Pipeline> {
    config.validate()?;
    let mut sentiments = Vec::with_capacity(docs.len());
    for (i, d) in docs.iter().enumerate() {
        let s = d.sentiment.ok_or(Error::MissingField {
            doc: i,
            field: "sentiment",
        })?;
        if s == Sentiment::Positive && d.sarcasm.is_none() {
            return Err(Error::MissingField {
                doc: i,
                field: "sarcasm",
            });
        }
        sentiments.push(s);
    }
    if !sentiments.contains(&Sentiment::Positive) {
        return Err(Error::NoPositives);
    }

    let registry = if config.uses_negativity() {
        compute_negativity(docs)?
    } else {
        TopicNegativityRegistry::default()
    };
    let tokens: Vec<TokenSeq> = docs
        .iter()
        .map(|d| normalize_with(&d.text, aux, &config.normalizer))
        .collect();
    let fx = FeatureExtractor::new(lexicon, aux, config.features);
    let hp = &config.hyperparams;
    let mut counts = TrainingCounts::default();

    let stage1_space = fx.build_space(tokens.iter(), config.feature_mode, config.stage1_groups);
    let stage1 = match config.stage1_method {
        Stage1Method::Direct => {
            let rows: Vec<_> = docs
                .iter()
                .zip(&tokens)
                .zip(&sentiments)
                .map(|((d, t), s)| (d, t, s.index()))
                .collect();
            let classes = Sentiment::ALL
                .iter()
                .map(|s| s.code().to_string())
                .collect();
            let data = build_dataset(&fx, &stage1_space, &registry, classes, &rows)?;
            counts.sentiment = Some(count_labels(data.labels(), 3));
            let seed = seed::derive(config.seed, "train/sentiment");
            Stage1Models::Direct(learners::train(&data, config.stage1_algorithm, hp, seed)?)
        }
        Stage1Method::Leveled => {
            let gate_rows: Vec<_> = docs
                .iter()
                .zip(&tokens)
                .zip(&sentiments)
                .map(|((d, t), s)| (d, t, usize::from(*s != Sentiment::Neutral)))
                .collect();
            let gate_data = build_dataset(
                &fx,
                &stage1_space,
                &registry,
                class_names(&GATE_CLASSES),
                &gate_rows,
            )?;
            counts.opinion_gate = Some(count_labels(gate_data.labels(), 2));
            let gate = learners::train(
                &gate_data,
                config.stage1_algorithm,
                hp,
                seed::derive(config.seed, "train/opinion_gate"),
            )?;

            let polarity_rows: Vec<_> = docs
                .iter()
                .zip(&tokens)
                .zip(&sentiments)
                .filter(|(_, s)| **s != Sentiment::Neutral)
                .map(|((d, t), s)| (d, t, usize::from(*s == Sentiment::Negative)))
                .collect();
            let polarity_data = build_dataset(
                &fx,
                &stage1_space,
                &registry,
                class_names(&POLARITY_CLASSES),
                &polarity_rows,
            )?;
            counts.polarity = Some(count_labels(polarity_data.labels(), 2));
            let polarity = learners::train(
                &polarity_data,
                config.stage1_algorithm,
                hp,
                seed::derive(config.seed, "train/polarity"),
            )?;
            Stage1Models::Leveled { gate, polarity }
        }
    };

    let positives: Vec<(&Document, &TokenSeq)> = docs
        .iter()
        .zip(&tokens)
        .zip(&sentiments)
        .filter(|(_, s)| **s == Sentiment::Positive)
        .map(|((d, t), _)| (d, t))
        .collect();
    let sarcasm_space = fx.build_space(
        positives.iter().map(|(_, t)| *t),
        config.feature_mode,
        config.stage2_groups,
    );
    let sarcasm_rows: Vec<_> = positives
        .iter()
        .map(|(d, t)| (*d, *t, usize::from(d.sarcasm == Some(true))))
        .collect();
    let sarcasm_data = build_dataset(
        &fx,
        &sarcasm_space,
        &registry,
        class_names(&SARCASM_CLASSES),
        &sarcasm_rows,
    )?;
    counts.sarcasm = count_labels(sarcasm_data.labels(), 2);
    let sarcasm = learners::train(
        &sarcasm_data,
        config.stage2_algorithm,
        hp,
        seed::derive(config.seed, "train/sarcasm"),
    )?;

    Ok(Pipeline {
        config: config.clone(),
        lexicon: lexicon.clone(),
        aux: aux.clone(),
        registry,
        stage1,
        sarcasm,
        counts,
    })
}

fn stage_scores(stage: &str, model: &Model, dist: &[f64]) -> StageScores {
    StageScores {
        stage: stage.to_string(),
        scores: model
            .classes()
            .iter()
            .cloned()
            .zip(dist.iter().copied())
            .collect(),
    }
}

impl Pipeline {
    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn lexicon(&self) -> &SentimentLexicon {
        &self.lexicon
    }

    pub fn aux(&self) -> &AuxLists {
        &self.aux
    }

    pub fn registry(&self) -> &TopicNegativityRegistry {
        &self.registry
    }

    pub fn stage1(&self) -> &Stage1Models {
        &self.stage1
    }

    pub fn sarcasm_model(&self) -> &Model {
        &self.sarcasm
    }

    pub fn training_counts(&self) -> &TrainingCounts {
        &self.counts
    }

    pub fn extractor(&self) -> FeatureExtractor<'_> {
        FeatureExtractor::new(&self.lexicon, &self.aux, self.config.features)
    }

    pub fn normalize(&self, text: &str) -> TokenSeq {
        normalize_with(text, &self.aux, &self.config.normalizer)
    }

    pub fn vectorize(
        &self,
        model: &Model,
        topic: Option<&str>,
        tokens: &TokenSeq,
    ) -> Result<FeatureVector> {
        self.extractor()
            .vectorize(topic, tokens, model.feature_space(), &self.registry)
    }

    pub fn classify(&self, text: &str, topic: Option<&str>) -> Result<Prediction> {
        let tokens = self.normalize(text);
        self.classify_tokens(&tokens, topic)
    }

    pub fn classify_document(&self, doc: &Document) -> Result<Prediction> {
        self.classify(&doc.text, doc.topic.as_deref())
    }

    pub fn classify_tokens(&self, tokens: &TokenSeq, topic: Option<&str>) -> Result<Prediction> {
        let (sentiment, mut stage_scores_out) = self.classify_stage1(tokens, topic)?;
        let sarcasm = if sentiment == Sentiment::Positive {
            let (sarcastic, scores) = self.classify_sarcasm(tokens, topic)?;
            stage_scores_out.push(scores);
            Some(sarcastic)
        } else {
            None
        };
        let final_label = match sarcasm {
            Some(true) => Sentiment::Negative,
            _ => sentiment,
        };
        Ok(Prediction {
            sentiment,
            sarcasm,
            final_label,
            stage_scores: stage_scores_out,
        })
    }

    /// Sentiment stage only.
    pub fn classify_stage1(
        &self,
        tokens: &TokenSeq,
        topic: Option<&str>,
    ) -> Result<(Sentiment, Vec<StageScores>)> {
        match &self.stage1 {
            Stage1Models::Direct(model) => {
                let v = self.vectorize(model, topic, tokens)?;
                let dist = model.predict_dist(&v)?;
                let label =
                    Sentiment::from_index(model.predict(&v)?).expect("three sentiment classes");
                Ok((label, vec![stage_scores(SENTIMENT_STAGE, model, &dist)]))
            }
            Stage1Models::Leveled { .. } => self.classify_leveled_stage1(tokens, topic),
        }
    }

    /// Leveled sentiment stage: the opinion gate decides neutral vs opinion and
    /// only opinion texts reach the polarity model.
    pub fn classify_leveled_stage1(
        &self,
        tokens: &TokenSeq,
        topic: Option<&str>,
    ) -> Result<(Sentiment, Vec<StageScores>)> {
        let Stage1Models::Leveled { gate, polarity } = &self.stage1 else {
            return Err(Error::Config(
                "pipeline was not trained with the leveled method".into(),
            ));
        };
        let v = self.vectorize(gate, topic, tokens)?;
        let gate_dist = gate.predict_dist(&v)?;
        let mut scores = vec![stage_scores(GATE_STAGE, gate, &gate_dist)];
        if gate.predict(&v)? == 0 {
            return Ok((Sentiment::Neutral, scores));
        }
        let pol_dist = polarity.predict_dist(&v)?;
        scores.push(stage_scores(POLARITY_STAGE, polarity, &pol_dist));
        let label = if polarity.predict(&v)? == 0 {
            Sentiment::Positive
        } else {
            Sentiment::Negative
        };
        Ok((label, scores))
    }

    /// Sarcasm stage only; callers normally reach it through [`Pipeline::classify`].
    pub fn classify_sarcasm(
        &self,
        tokens: &TokenSeq,
        topic: Option<&str>,
    ) -> Result<(bool, StageScores)> {
        let v = self.vectorize(&self.sarcasm, topic, tokens)?;
        let dist = self.sarcasm.predict_dist(&v)?;
        let sarcastic = self.sarcasm.predict(&v)? == 1;
        Ok((sarcastic, stage_scores(SARCASM_STAGE, &self.sarcasm, &dist)))
    }

    /// Writes a bundle directory: manifest, stage models, negativity registry
    /// and the resources the pipeline was trained with.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let resources = dir.join("resources");
        fs::create_dir_all(&resources).map_err(|e| Error::io(&resources, e))?;
        let write = |name: &str, bytes: Vec<u8>| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
        };

        let mut models = BTreeMap::new();
        match &self.stage1 {
            Stage1Models::Direct(m) => {
                models.insert(SENTIMENT_STAGE.to_string(), "sentiment.model".to_string());
                write("sentiment.model", m.to_bytes())?;
            }
            Stage1Models::Leveled { gate, polarity } => {
                models.insert(GATE_STAGE.to_string(), "opinion_gate.model".to_string());
                models.insert(POLARITY_STAGE.to_string(), "polarity.model".to_string());
                write("opinion_gate.model", gate.to_bytes())?;
                write("polarity.model", polarity.to_bytes())?;
            }
        }
        models.insert(SARCASM_STAGE.to_string(), "sarcasm.model".to_string());
        write("sarcasm.model", self.sarcasm.to_bytes())?;
        write("negativity.tsv", self.registry.to_tsv().into_bytes())?;
        self.lexicon.save(&resources.join("lexicon.tsv"))?;
        self.aux.save_to_dir(&resources)?;

        let manifest = Manifest {
            format_version: MODEL_FORMAT_VERSION,
            config: self.config.clone(),
            models,
            negativity: "negativity.tsv".into(),
            resources: "resources".into(),
            training_counts: self.counts.clone(),
        };
        let mut body = format!("{BUNDLE_MAGIC} {MODEL_FORMAT_VERSION}\n").into_bytes();
        body.extend(serde_json::to_vec_pretty(&manifest)?);
        body.push(b'\n');
        write("manifest.json", body)
    }

    pub fn load(dir: &Path) -> Result<Pipeline> {
        let manifest_path = dir.join("manifest.json");
        let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| Error::Corrupt("manifest has no header line".into()))?;
        parse_header(header, BUNDLE_MAGIC)?;
        let manifest: Manifest =
            serde_json::from_str(body).map_err(|e| Error::Corrupt(e.to_string()))?;
        if manifest.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: manifest.format_version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        manifest.config.validate()?;

        let model = |stage: &str| -> Result<Model> {
            let file = manifest
                .models
                .get(stage)
                .ok_or_else(|| Error::Corrupt(format!("manifest lists no '{stage}' model")))?;
            Model::load(&dir.join(file))
        };
        let stage1 = match manifest.config.stage1_method {
            Stage1Method::Direct => Stage1Models::Direct(model(SENTIMENT_STAGE)?),
            Stage1Method::Leveled => Stage1Models::Leveled {
                gate: model(GATE_STAGE)?,
                polarity: model(POLARITY_STAGE)?,
            },
        };
        let sarcasm = model(SARCASM_STAGE)?;
        let registry = TopicNegativityRegistry::load(&dir.join(&manifest.negativity))?;
        let resources = dir.join(&manifest.resources);
        let lexicon = load_lexicon(&resources.join("lexicon.tsv"))?;
        let aux = load_aux_lists(&AuxPaths::in_dir(&resources))?;

        Ok(Pipeline {
            config: manifest.config,
            lexicon,
            aux,
            registry,
            stage1,
            sarcasm,
            counts: manifest.training_counts,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    config: PipelineConfig,
    models: BTreeMap<String, String>,
    negativity: String,
    resources: String,
    training_counts: TrainingCounts,
}
