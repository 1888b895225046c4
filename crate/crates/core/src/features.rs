//! Feature extraction.
//!
//! Unigram features come only from scorable terms: lexicon entries plus the
//! surface forms named by the context and affix override lists. Each scored
//! term carries two nonnegative channels, `pos` and `neg`; negation swaps the
//! channels instead of flipping a sign, which keeps every feature value usable
//! as a fractional count by multinomial Naive Bayes.
//!
//! Extra slots carry topic negativity, the interjection count and a
//! question-word flag.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Document, Sentiment};
use crate::error::{Error, Result};
use crate::lexicon::{AuxLists, SentimentLexicon};
use crate::normalizer::TokenSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    /// Presence counts, one column per term.
    Lexical,
    /// Lexicon masses, a `pos` and a `neg` column per term.
    Score,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureGroups {
    pub unigram: bool,
    pub negativity: bool,
    pub interjection: bool,
    pub question: bool,
}

impl FeatureGroups {
    pub const UNIGRAM: FeatureGroups = FeatureGroups {
        unigram: true,
        negativity: false,
        interjection: false,
        question: false,
    };
    /// Sentiment stage defaults: unigram + question flag.
    pub const SENTIMENT: FeatureGroups = FeatureGroups {
        question: true,
        ..Self::UNIGRAM
    };
    /// Sarcasm stage defaults: unigram + negativity + interjection count.
    pub const SARCASM: FeatureGroups = FeatureGroups {
        negativity: true,
        interjection: true,
        ..Self::UNIGRAM
    };
    pub const ALL: FeatureGroups = FeatureGroups {
        unigram: true,
        negativity: true,
        interjection: true,
        question: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermWeighting {
    /// Repeated terms accumulate their masses.
    Additive,
    /// Each term counts once; channels take the per-occurrence maximum.
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnknownTopicPolicy {
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// How many tokens before a sentiment word a negation word may sit.
    pub negation_window: usize,
    pub term_weighting: TermWeighting,
    pub unknown_topic: UnknownTopicPolicy,
    /// Negativity used for unknown topics under the lenient policy.
    pub unknown_topic_negativity: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            negation_window: 3,
            term_weighting: TermWeighting::Additive,
            unknown_topic: UnknownTopicPolicy::Lenient,
            unknown_topic_negativity: 0.5,
        }
    }
}

/// Column layout for one model: unigram columns first (sorted by term), then
/// the enabled extra slots in the order negativity, interjection, question.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "SpaceRepr", into = "SpaceRepr")]
pub struct FeatureSpace {
    mode: FeatureMode,
    groups: FeatureGroups,
    terms: Vec<String>,
    index: HashMap<String, usize>,
    negativity_slot: Option<usize>,
    interjection_slot: Option<usize>,
    question_slot: Option<usize>,
    dim: usize,
    fingerprint: u64,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    mode: FeatureMode,
    groups: FeatureGroups,
    terms: Vec<String>,
}

impl From<SpaceRepr> for FeatureSpace {
    fn from(r: SpaceRepr) -> Self {
        FeatureSpace::new(r.mode, r.groups, r.terms)
    }
}

impl From<FeatureSpace> for SpaceRepr {
    fn from(s: FeatureSpace) -> Self {
        SpaceRepr {
            mode: s.mode,
            groups: s.groups,
            terms: s.terms,
        }
    }
}

impl PartialEq for FeatureSpace {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.groups == other.groups && self.terms == other.terms
    }
}

impl FeatureSpace {
    /// Freezes a space over `terms` (sorted and deduplicated here). With the
    /// unigram group disabled the term list is dropped.
    pub fn new(
        mode: FeatureMode,
        groups: FeatureGroups,
        terms: impl IntoIterator<Item = String>,
    ) -> Self {
        let mut terms: Vec<String> = if groups.unigram {
            terms.into_iter().collect()
        } else {
            Vec::new()
        };
        terms.sort();
        terms.dedup();
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let per_term = match mode {
            FeatureMode::Lexical => 1,
            FeatureMode::Score => 2,
        };
        let mut dim = terms.len() * per_term;
        let mut slot = |on: bool| {
            on.then(|| {
                dim += 1;
                dim - 1
            })
        };
        let negativity_slot = slot(groups.negativity);
        let interjection_slot = slot(groups.interjection);
        let question_slot = slot(groups.question);

        let repr = SpaceRepr {
            mode,
            groups,
            terms,
        };
        let digest = Sha256::digest(serde_json::to_vec(&repr).expect("space serializes"));
        let mut fp = [0u8; 8];
        fp.copy_from_slice(&digest[..8]);
        FeatureSpace {
            mode,
            groups,
            terms: repr.terms,
            index,
            negativity_slot,
            interjection_slot,
            question_slot,
            dim,
            fingerprint: u64::from_le_bytes(fp),
        }
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn groups(&self) -> FeatureGroups {
        self.groups
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Column of the positive channel (SCORE) or the count (LEXICAL) of `term`.
    pub fn unigram_column(&self, term: &str) -> Option<usize> {
        self.term_index(term).map(|i| match self.mode {
            FeatureMode::Lexical => i,
            FeatureMode::Score => 2 * i,
        })
    }

    /// Column of the negative channel; SCORE mode only.
    pub fn unigram_neg_column(&self, term: &str) -> Option<usize> {
        match self.mode {
            FeatureMode::Lexical => None,
            FeatureMode::Score => self.term_index(term).map(|i| 2 * i + 1),
        }
    }

    pub fn negativity_slot(&self) -> Option<usize> {
        self.negativity_slot
    }

    pub fn interjection_slot(&self) -> Option<usize> {
        self.interjection_slot
    }

    pub fn question_slot(&self) -> Option<usize> {
        self.question_slot
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Builds a vector in this space. Duplicate indices are summed and zeros dropped.
    pub fn vector(&self, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<FeatureVector> {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, v) in entries {
            if i >= self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: i + 1,
                });
            }
            *merged.entry(i).or_insert(0.0) += v;
        }
        Ok(FeatureVector {
            space: self.fingerprint,
            dim: self.dim,
            entries: merged.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        })
    }

    /// Human-readable column name.
    pub fn column_name(&self, column: usize) -> Option<String> {
        if Some(column) == self.negativity_slot {
            return Some("NEGATIVITY".into());
        }
        if Some(column) == self.interjection_slot {
            return Some("INTERJECTION_COUNT".into());
        }
        if Some(column) == self.question_slot {
            return Some("QUESTION_FLAG".into());
        }
        match self.mode {
            FeatureMode::Lexical => self.terms.get(column).cloned(),
            FeatureMode::Score => self.terms.get(column / 2).map(|t| {
                format!(
                    "{t}_{}",
                    if column.is_multiple_of(2) {
                        "pos"
                    } else {
                        "neg"
                    }
                )
            }),
        }
    }
}

/// Sparse vector tied to one [`FeatureSpace`] by fingerprint.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    space: u64,
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl FeatureVector {
    pub fn space_fingerprint(&self) -> u64 {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero `(column, value)` pairs in column order.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn get(&self, column: usize) -> f64 {
        self.entries
            .binary_search_by_key(&column, |&(i, _)| i)
            .map(|k| self.entries[k].1)
            .unwrap_or(0.0)
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| weights[i] * v).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Copy with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> FeatureVector {
        FeatureVector {
            space: self.space,
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, v)| (i, v * c)).collect(),
        }
    }
}

/// Accumulated masses of one scored term.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnigramMass {
    pub pos: f64,
    pub neg: f64,
    /// Occurrences (1 under binary weighting).
    pub count: u32,
}

fn signed_channels(s: f64) -> (f64, f64) {
    if s >= 0.0 {
        (s, 0.0)
    } else {
        (0.0, -s)
    }
}

/// Per-topic share of negative documents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicNegativity {
    pub fraction: f64,
    pub sample_size: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TopicNegativityRegistry {
    topics: BTreeMap<String, TopicNegativity>,
}

impl TopicNegativityRegistry {
    pub fn get(&self, topic: &str) -> Option<f64> {
        self.topics.get(topic).map(|t| t.fraction)
    }

    pub fn entry(&self, topic: &str) -> Option<TopicNegativity> {
        self.topics.get(topic).copied()
    }

    pub fn insert(
        &mut self,
        topic: impl Into<String>,
        fraction: f64,
        sample_size: u32,
    ) -> Result<()> {
        let topic = topic.into();
        if !(0.0..=1.0).contains(&fraction) || sample_size == 0 {
            return Err(Error::Validation {
                term: topic,
                line: None,
                reason: format!("negativity {fraction} over {sample_size} samples"),
            });
        }
        self.topics.insert(
            topic,
            TopicNegativity {
                fraction,
                sample_size,
            },
        );
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TopicNegativity)> {
        self.topics.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    /// `topic<TAB>fraction<TAB>sample_size` per line, sorted by topic.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (topic, t) in &self.topics {
            out.push_str(&format!("{topic}\t{}\t{}\n", t.fraction, t.sample_size));
        }
        out
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut reg = TopicNegativityRegistry::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    source,
                    i + 1,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let fraction: f64 = cols[1]
                .parse()
                .map_err(|_| Error::parse(source, i + 1, "fraction is not a number"))?;
            let sample_size: u32 = cols[2]
                .parse()
                .map_err(|_| Error::parse(source, i + 1, "sample_size is not an integer"))?;
            reg.insert(cols[0], fraction, sample_size)
                .map_err(|e| Error::parse(source, i + 1, e.to_string()))?;
        }
        Ok(reg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Negative share per topic over a labeled corpus.
pub fn compute_negativity(docs: &[Document]) -> Result<TopicNegativityRegistry> {
    let mut counts: BTreeMap<&str, (u32, u32)> = BTreeMap::new();
    for (i, doc) in docs.iter().enumerate() {
        let topic = doc.topic.as_deref().ok_or(Error::MissingField {
            doc: i,
            field: "topic",
        })?;
        let sentiment = doc.sentiment.ok_or(Error::MissingField {
            doc: i,
            field: "sentiment",
        })?;
        let c = counts.entry(topic).or_default();
        c.1 += 1;
        if sentiment == Sentiment::Negative {
            c.0 += 1;
        }
    }
    let mut reg = TopicNegativityRegistry::default();
    for (topic, (neg, total)) in counts {
        reg.insert(topic, neg as f64 / total as f64, total)?;
    }
    Ok(reg)
}

/// Borrowed resources plus extraction settings.
#[derive(Debug, Clone, Copy)]
pub struct FeatureExtractor<'a> {
    pub lexicon: &'a SentimentLexicon,
    pub aux: &'a AuxLists,
    pub config: FeatureConfig,
}

impl<'a> FeatureExtractor<'a> {
    pub fn new(lexicon: &'a SentimentLexicon, aux: &'a AuxLists, config: FeatureConfig) -> Self {
        FeatureExtractor {
            lexicon,
            aux,
            config,
        }
    }

    /// Base score of the token at `i` before negation: a context override
    /// keyed on the preceding token wins over an affix override, which wins
    /// over the lexicon. `None` for tokens that are not scorable.
    fn base_score(&self, tokens: &[String], i: usize) -> Option<(f64, f64)> {
        let term = &tokens[i];
        if i > 0 {
            let key = (tokens[i - 1].clone(), term.clone());
            if let Some(&s) = self.aux.context_overrides.get(&key) {
                return Some(signed_channels(s));
            }
        }
        if let Some(&s) = self.aux.affix_overrides.get(term) {
            return Some(signed_channels(s));
        }
        self.lexicon.lookup(term).map(|e| (e.pos, e.neg))
    }

    /// Masses of every scorable term.
    ///
    /// Each negation word is consumed by the first scorable term after it,
    /// provided that term lies within `negation_window` tokens. A term that
    /// consumes an odd number of negations has its channels swapped.
    /// Negation words themselves are never scored.
    pub fn score_unigrams(&self, tokens: &[String]) -> BTreeMap<String, UnigramMass> {
        let window = self.config.negation_window;
        let mut pending: Vec<usize> = Vec::new();
        let mut out: BTreeMap<String, UnigramMass> = BTreeMap::new();

        for (i, term) in tokens.iter().enumerate() {
            if self.aux.negations.contains(term) {
                pending.push(i);
                continue;
            }
            let Some((mut pos, mut neg)) = self.base_score(tokens, i) else {
                continue;
            };
            let in_window = pending.iter().filter(|&&p| i - p <= window).count();
            pending.clear();
            if in_window % 2 == 1 {
                std::mem::swap(&mut pos, &mut neg);
            }

            let m = out.entry(term.clone()).or_default();
            match self.config.term_weighting {
                TermWeighting::Additive => {
                    m.pos += pos;
                    m.neg += neg;
                    m.count += 1;
                }
                TermWeighting::Binary => {
                    m.pos = m.pos.max(pos);
                    m.neg = m.neg.max(neg);
                    m.count = 1;
                }
            }
        }
        out
    }

    pub fn interjection_count(&self, tokens: &[String]) -> u32 {
        interjection_count(tokens, self.aux)
    }

    pub fn question_flag(&self, tokens: &[String]) -> bool {
        question_flag(tokens, self.aux)
    }

    /// Union of scorable terms over `docs`, frozen into a space.
    pub fn build_space<'t>(
        &self,
        docs: impl IntoIterator<Item = &'t TokenSeq>,
        mode: FeatureMode,
        groups: FeatureGroups,
    ) -> FeatureSpace {
        let mut terms = std::collections::BTreeSet::new();
        if groups.unigram {
            for tokens in docs {
                terms.extend(self.score_unigrams(tokens).into_keys());
            }
        }
        FeatureSpace::new(mode, groups, terms)
    }

    pub fn vectorize(
        &self,
        topic: Option<&str>,
        tokens: &[String],
        space: &FeatureSpace,
        registry: &TopicNegativityRegistry,
    ) -> Result<FeatureVector> {
        let groups = space.groups();
        let mut entries: Vec<(usize, f64)> = Vec::new();

        if groups.unigram {
            for (term, m) in self.score_unigrams(tokens) {
                let Some(i) = space.term_index(&term) else {
                    continue;
                };
                match space.mode() {
                    FeatureMode::Score => {
                        entries.push((2 * i, m.pos));
                        entries.push((2 * i + 1, m.neg));
                    }
                    FeatureMode::Lexical => entries.push((i, m.count as f64)),
                }
            }
        }
        if let Some(slot) = space.negativity_slot() {
            let known = topic.and_then(|t| registry.get(t));
            let value = match (known, self.config.unknown_topic) {
                (Some(v), _) => v,
                (None, UnknownTopicPolicy::Lenient) => self.config.unknown_topic_negativity,
                (None, UnknownTopicPolicy::Strict) => {
                    return Err(Error::UnknownTopic(topic.unwrap_or("").to_string()))
                }
            };
            entries.push((slot, value));
        }
        if let Some(slot) = space.interjection_slot() {
            entries.push((slot, self.interjection_count(tokens) as f64));
        }
        if let Some(slot) = space.question_slot() {
            entries.push((slot, if self.question_flag(tokens) { 1.0 } else { 0.0 }));
        }
        space.vector(entries)
    }
}

/// Tokens (with multiplicity) that are interjections.
pub fn interjection_count(tokens: &[String], aux: &AuxLists) -> u32 {
    tokens
        .iter()
        .filter(|t| aux.interjections.contains(*t))
        .count() as u32
}

pub fn question_flag(tokens: &[String], aux: &AuxLists) -> bool {
    tokens.iter().any(|t| aux.question_words.contains(t))
}

/// [`FeatureExtractor::score_unigrams`] with default settings.
pub fn score_unigrams(
    tokens: &[String],
    lexicon: &SentimentLexicon,
    aux: &AuxLists,
) -> BTreeMap<String, UnigramMass> {
    FeatureExtractor::new(lexicon, aux, FeatureConfig::default()).score_unigrams(tokens)
}
