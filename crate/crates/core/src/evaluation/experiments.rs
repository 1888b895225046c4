//! The three comparative experiments. Each one splits the corpus once,
//! trains one pipeline per (algorithm, condition) cell on the training part
//! and scores it on the test part.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{evaluate_sentiment, Metrics};
use super::report::{ExperimentReport, ReportRow, ReportSection};
use super::split::split;
use crate::corpus::{Document, Sentiment};
use crate::error::{Error, Result};
use crate::features::{FeatureGroups, FeatureMode};
use crate::learners::Algorithm;
use crate::lexicon::{AuxLists, SentimentLexicon};
use crate::pipeline::{train_pipeline, Pipeline, PipelineConfig, Stage1Method, Stage1Models};

pub const SCORE_EXPERIMENT: &str = "score";
pub const METHOD_EXPERIMENT: &str = "method";
pub const SARCASM_EXPERIMENT: &str = "sarcasm";

pub const SENTIMENT_SECTION: &str = "sentiment";
pub const LEVELED_STAGES_SECTION: &str = "leveled_stages";
pub const GOLD_POSITIVES_SECTION: &str = "gold_positives";
pub const PREDICTED_POSITIVES_SECTION: &str = "predicted_positives";

pub const UNIGRAM_CONDITION: &str = "unigram";
pub const AUGMENTED_CONDITION: &str = "unigram+negativity+interjection";

fn default_jobs() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub train_fraction: f64,
    /// Base settings; each cell overrides the fields its experiment varies.
    pub pipeline: PipelineConfig,
    /// Cells computed concurrently. Does not affect results.
    #[serde(skip, default = "default_jobs")]
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            train_fraction: 980.0 / 1280.0,
            pipeline: PipelineConfig::default(),
            jobs: 1,
        }
    }
}

/// Corpus, resources and settings shared by every cell.
struct Setup<'a> {
    train: Vec<Document>,
    test: Vec<Document>,
    lexicon: &'a SentimentLexicon,
    aux: &'a AuxLists,
    config: &'a ExperimentConfig,
    seed: u64,
}

impl Setup<'_> {
    fn new<'a>(
        corpus: &[Document],
        lexicon: &'a SentimentLexicon,
        aux: &'a AuxLists,
        config: &'a ExperimentConfig,
        seed: u64,
    ) -> Result<Setup<'a>> {
        if corpus.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let (train, test) = split(corpus, config.train_fraction, seed)?;
        Ok(Setup {
            train,
            test,
            lexicon,
            aux,
            config,
            seed,
        })
    }

    fn train(&self, edit: impl FnOnce(&mut PipelineConfig)) -> Result<Pipeline> {
        let mut cfg = self.config.pipeline.clone();
        cfg.seed = self.seed;
        edit(&mut cfg);
        train_pipeline(&self.train, self.lexicon, self.aux, &cfg)
    }

    fn report(&self, experiment: &str, sections: Vec<ReportSection>) -> ExperimentReport {
        ExperimentReport {
            experiment: experiment.to_string(),
            seed: self.seed,
            config: self.config.clone(),
            train_size: self.train.len(),
            test_size: self.test.len(),
            sections,
        }
    }
}

/// Runs `f` over `cells`, on `jobs` threads when `jobs > 1`. Output order
/// follows `cells` and the first failing cell (in that order) wins.
fn run_cells<C, T, F>(jobs: usize, cells: &[C], f: F) -> Result<Vec<T>>
where
    C: Sync,
    T: Send,
    F: Fn(&C) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = if jobs <= 1 {
        cells.iter().map(&f).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))?;
        pool.install(|| cells.par_iter().map(&f).collect())
    };
    results.into_iter().collect()
}

fn grid<A: Copy, B: Copy>(rows: &[A], cols: &[B]) -> Vec<(A, B)> {
    rows.iter()
        .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
        .collect()
}

fn algorithm_section(name: &str, columns: &[&str], cells: Vec<Metrics>) -> ReportSection {
    let mut cells = cells.into_iter();
    let rows = Algorithm::ALL
        .iter()
        .map(|a| ReportRow {
            key: a.code().to_string(),
            cells: cells.by_ref().take(columns.len()).collect(),
        })
        .collect();
    ReportSection {
        name: name.to_string(),
        row_label: "algorithm".into(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    }
}

fn mode_name(mode: FeatureMode) -> &'static str {
    match mode {
        FeatureMode::Lexical => "lexical",
        FeatureMode::Score => "score",
    }
}

/// Lexical presence vs lexicon score features on the direct 3-class task.
pub fn experiment_sentiment_score(
    corpus: &[Document],
    lexicon: &SentimentLexicon,
    aux: &AuxLists,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let setup = Setup::new(corpus, lexicon, aux, config, seed)?;
    let modes = [FeatureMode::Lexical, FeatureMode::Score];
    let cells = grid(&Algorithm::ALL, &modes);
    let metrics = run_cells(config.jobs, &cells, |&(alg, mode)| {
        let p = setup.train(|c| {
            c.stage1_method = Stage1Method::Direct;
            c.stage1_algorithm = alg;
            c.stage2_algorithm = alg;
            c.feature_mode = mode;
        })?;
        evaluate_sentiment(&p, &setup.test)
    })?;
    let columns = modes.map(mode_name);
    Ok(setup.report(
        SCORE_EXPERIMENT,
        vec![algorithm_section(SENTIMENT_SECTION, &columns, metrics)],
    ))
}

/// Opinion gate on every test document and polarity on gold opinion documents.
fn leveled_stage_metrics(p: &Pipeline, test: &[Document]) -> Result<(Metrics, Metrics)> {
    let Stage1Models::Leveled { gate, polarity } = p.stage1() else {
        return Err(Error::Config("expected a leveled pipeline".into()));
    };
    let mut gate_pairs = Vec::new();
    let mut polarity_pairs = Vec::new();
    for (i, doc) in test.iter().enumerate() {
        let gold = doc.sentiment.ok_or(Error::MissingField {
            doc: i,
            field: "sentiment",
        })?;
        let tokens = p.normalize(&doc.text);
        let topic = doc.topic.as_deref();
        let v = p.vectorize(gate, topic, &tokens)?;
        gate_pairs.push((usize::from(gold != Sentiment::Neutral), gate.predict(&v)?));
        if gold != Sentiment::Neutral {
            let v = p.vectorize(polarity, topic, &tokens)?;
            polarity_pairs.push((
                usize::from(gold == Sentiment::Negative),
                polarity.predict(&v)?,
            ));
        }
    }
    Ok((
        Metrics::from_pairs(gate.classes().to_vec(), gate_pairs)?,
        Metrics::from_pairs(polarity.classes().to_vec(), polarity_pairs)?,
    ))
}

/// Direct 3-class vs leveled (gate then polarity) sentiment classification,
/// plus the accuracy of each leveled sub-classifier.
pub fn experiment_method(
    corpus: &[Document],
    lexicon: &SentimentLexicon,
    aux: &AuxLists,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let setup = Setup::new(corpus, lexicon, aux, config, seed)?;
    let methods = [Stage1Method::Direct, Stage1Method::Leveled];
    let cells = grid(&Algorithm::ALL, &methods);
    let results = run_cells(config.jobs, &cells, |&(alg, method)| {
        let p = setup.train(|c| {
            c.stage1_method = method;
            c.stage1_algorithm = alg;
            c.stage2_algorithm = alg;
            c.stage1_groups = FeatureGroups::SENTIMENT;
            c.feature_mode = FeatureMode::Score;
        })?;
        let end_to_end = evaluate_sentiment(&p, &setup.test)?;
        let stages = match method {
            Stage1Method::Leveled => Some(leveled_stage_metrics(&p, &setup.test)?),
            Stage1Method::Direct => None,
        };
        Ok((end_to_end, stages))
    })?;

    let mut top = Vec::new();
    let mut gate_row = Vec::new();
    let mut polarity_row = Vec::new();
    for (m, stages) in results {
        top.push(m);
        if let Some((g, p)) = stages {
            gate_row.push(g);
            polarity_row.push(p);
        }
    }
    let stages = ReportSection {
        name: LEVELED_STAGES_SECTION.into(),
        row_label: "stage".into(),
        columns: Algorithm::ALL
            .iter()
            .map(|a| a.code().to_string())
            .collect(),
        rows: vec![
            ReportRow {
                key: crate::pipeline::GATE_STAGE.into(),
                cells: gate_row,
            },
            ReportRow {
                key: crate::pipeline::POLARITY_STAGE.into(),
                cells: polarity_row,
            },
        ],
    };
    let columns = methods.map(|m| match m {
        Stage1Method::Direct => "direct",
        Stage1Method::Leveled => "leveled",
    });
    Ok(setup.report(
        METHOD_EXPERIMENT,
        vec![algorithm_section(SENTIMENT_SECTION, &columns, top), stages],
    ))
}

fn sarcasm_classes() -> Vec<String> {
    vec!["not_sarcastic".into(), "sarcastic".into()]
}

/// Sarcasm verdicts on gold positive test documents, and on test documents
/// the sentiment stage predicts positive (gold: sarcastic iff labeled so).
fn sarcasm_metrics(p: &Pipeline, test: &[Document]) -> Result<(Metrics, Metrics)> {
    let mut gold_pairs = Vec::new();
    let mut predicted_pairs = Vec::new();
    for (i, doc) in test.iter().enumerate() {
        let gold = doc.sentiment.ok_or(Error::MissingField {
            doc: i,
            field: "sentiment",
        })?;
        let sarcastic = usize::from(doc.sarcasm == Some(true));
        let tokens = p.normalize(&doc.text);
        let topic = doc.topic.as_deref();
        let verdict =
            || -> Result<usize> { Ok(usize::from(p.classify_sarcasm(&tokens, topic)?.0)) };
        if gold == Sentiment::Positive {
            if doc.sarcasm.is_none() {
                return Err(Error::MissingField {
                    doc: i,
                    field: "sarcasm",
                });
            }
            gold_pairs.push((sarcastic, verdict()?));
        }
        if p.classify_stage1(&tokens, topic)?.0 == Sentiment::Positive {
            predicted_pairs.push((sarcastic, verdict()?));
        }
    }
    Ok((
        Metrics::from_pairs(sarcasm_classes(), gold_pairs)?,
        Metrics::from_pairs(sarcasm_classes(), predicted_pairs)?,
    ))
}

/// Unigram-only vs unigram + negativity + interjection sarcasm features,
/// scored on gold positives and on predicted positives.
pub fn experiment_sarcasm(
    corpus: &[Document],
    lexicon: &SentimentLexicon,
    aux: &AuxLists,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let setup = Setup::new(corpus, lexicon, aux, config, seed)?;
    let conditions = [FeatureGroups::UNIGRAM, FeatureGroups::SARCASM];
    let cells = grid(&Algorithm::ALL, &conditions);
    let results = run_cells(config.jobs, &cells, |&(alg, groups)| {
        let p = setup.train(|c| {
            c.stage1_method = Stage1Method::Direct;
            c.stage1_algorithm = alg;
            c.stage2_algorithm = alg;
            c.stage2_groups = groups;
        })?;
        sarcasm_metrics(&p, &setup.test)
    })?;
    let (gold, predicted): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let columns = [UNIGRAM_CONDITION, AUGMENTED_CONDITION];
    Ok(setup.report(
        SARCASM_EXPERIMENT,
        vec![
            algorithm_section(GOLD_POSITIVES_SECTION, &columns, gold),
            algorithm_section(PREDICTED_POSITIVES_SECTION, &columns, predicted),
        ],
    ))
}
