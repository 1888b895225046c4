//! Sentiment lexicon and auxiliary word lists.
//!
//! The lexicon maps an Indonesian term to a pair of SentiWordNet-style scores
//! `(pos, neg)`. Source files may carry several rows per term (one per source
//! translation); those rows are averaged into a single entry at load time.
//!
//! [`AuxLists`] bundles everything else the normalizer and the feature
//! extractor need: the informal-to-formal dictionary, negation words,
//! interjections, question words and the two override lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

const SCORE_SUM_SLACK: f64 = 1e-9;

/// Merged scores of one lexicon term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub pos: f64,
    pub neg: f64,
}

impl LexiconEntry {
    pub fn new(pos: f64, neg: f64) -> Self {
        LexiconEntry { pos, neg }
    }
}

/// One unmerged `(term, pos, neg)` row, optionally tagged with its source line.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTranslation {
    pub term: String,
    pub pos: f64,
    pub neg: f64,
    pub line: Option<usize>,
}

impl RawTranslation {
    pub fn new(term: impl Into<String>, pos: f64, neg: f64) -> Self {
        RawTranslation {
            term: term.into(),
            pos,
            neg,
            line: None,
        }
    }
}

/// Lowercase + NFC, the only normalization applied to resource keys.
pub fn fold_term(term: &str) -> String {
    term.nfc().collect::<String>().to_lowercase()
}

fn check_term(term: &str, line: Option<usize>) -> Result<()> {
    if term.is_empty() {
        return Err(Error::Validation {
            term: term.to_string(),
            line,
            reason: "empty term".into(),
        });
    }
    if term.chars().any(char::is_whitespace) {
        return Err(Error::Validation {
            term: term.to_string(),
            line,
            reason: "term contains whitespace".into(),
        });
    }
    Ok(())
}

fn check_scores(term: &str, pos: f64, neg: f64, line: Option<usize>) -> Result<()> {
    let bad = |reason: String| Error::Validation {
        term: term.to_string(),
        line,
        reason,
    };
    for (name, v) in [("pos_score", pos), ("neg_score", neg)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(bad(format!("{name} {v} outside [0, 1]")));
        }
    }
    if pos + neg > 1.0 + SCORE_SUM_SLACK {
        return Err(bad(format!(
            "pos_score + neg_score = {} exceeds 1",
            pos + neg
        )));
    }
    Ok(())
}

/// Term → merged scores, plus how many source rows fed each term.
///
/// Equality compares entries only; source counts are provenance and are not
/// preserved by [`SentimentLexicon::to_tsv`].
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, LexiconEntry>,
    source_count: BTreeMap<String, u32>,
}

impl PartialEq for SentimentLexicon {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

/// Averages every row sharing a term into one entry.
///
/// Each channel is summed in sorted order, so the result does not depend on
/// the order of `raw`; the mean is clamped to the observed `[min, max]` to
/// absorb rounding in the division.
pub fn merge_translations(raw: &[RawTranslation]) -> Result<SentimentLexicon> {
    let mut grouped: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for row in raw {
        let term = fold_term(&row.term);
        check_term(&term, row.line)?;
        check_scores(&term, row.pos, row.neg, row.line)?;
        let slot = grouped.entry(term).or_default();
        slot.0.push(row.pos);
        slot.1.push(row.neg);
    }

    let mut lex = SentimentLexicon::default();
    for (term, (mut pos, mut neg)) in grouped {
        let n = pos.len();
        let entry = LexiconEntry::new(sorted_mean(&mut pos), sorted_mean(&mut neg));
        lex.source_count.insert(term.clone(), n as u32);
        lex.entries.insert(term, entry);
    }
    Ok(lex)
}

fn sorted_mean(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let sum: f64 = values.iter().sum();
    let mean = sum / values.len() as f64;
    mean.clamp(values[0], values[values.len() - 1])
}

impl SentimentLexicon {
    pub fn lookup(&self, term: &str) -> Option<LexiconEntry> {
        match self.entries.get(term) {
            Some(e) => Some(*e),
            None => self.entries.get(&fold_term(term)).copied(),
        }
    }

    pub fn contains(&self, term: &str) -> bool {
        self.lookup(term).is_some()
    }

    /// Number of source rows merged into `term`.
    pub fn source_count(&self, term: &str) -> Option<u32> {
        self.source_count.get(&fold_term(term)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in term order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, LexiconEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Parses lexicon TSV text; `source` names the origin in error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (line_no, line) in data_lines(text) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    source,
                    line_no,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let pos = parse_f64(cols[1], source, line_no, "pos_score")?;
            let neg = parse_f64(cols[2], source, line_no, "neg_score")?;
            raw.push(RawTranslation {
                term: cols[0].to_string(),
                pos,
                neg,
                line: Some(line_no),
            });
        }
        merge_translations(&raw)
    }

    /// One row per merged term, sorted. Reloading the output yields the same entries.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# term\tpos_score\tneg_score\n");
        for (term, e) in &self.entries {
            out.push_str(&format!("{term}\t{}\t{}\n", e.pos, e.neg));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/lexicon.tsv"), "bundled lexicon.tsv")
            .expect("bundled lexicon is valid")
    }
}

pub fn load_lexicon(path: &Path) -> Result<SentimentLexicon> {
    let text = read(path)?;
    SentimentLexicon::parse(&text, &path.display().to_string())
}

/// Yields `(1-based line number, line)` for every non-blank, non-comment line.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_f64(field: &str, source: &str, line: usize, name: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(source, line, format!("{name} '{field}' is not a number")))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Auxiliary word lists used by normalization and feature extraction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuxLists {
    pub informal_dict: BTreeMap<String, String>,
    pub negations: BTreeSet<String>,
    pub interjections: BTreeSet<String>,
    pub question_words: BTreeSet<String>,
    /// `(context, target)` → signed score; applies when `context` immediately precedes `target`.
    pub context_overrides: BTreeMap<(String, String), f64>,
    /// Surface form → signed score, for affixed words whose polarity differs from the root.
    pub affix_overrides: BTreeMap<String, f64>,
}

/// File locations for [`load_aux_lists`]. Missing entries load as empty lists.
#[derive(Debug, Clone, Default)]
pub struct AuxPaths {
    pub informal_dict: Option<PathBuf>,
    pub negations: Option<PathBuf>,
    pub interjections: Option<PathBuf>,
    pub question_words: Option<PathBuf>,
    pub context_overrides: Option<PathBuf>,
    pub affix_overrides: Option<PathBuf>,
}

impl AuxPaths {
    /// Standard file names inside a directory, as written by [`AuxLists::save_to_dir`].
    pub fn in_dir(dir: &Path) -> Self {
        AuxPaths {
            informal_dict: Some(dir.join("informal.tsv")),
            negations: Some(dir.join("negations.txt")),
            interjections: Some(dir.join("interjections.txt")),
            question_words: Some(dir.join("question_words.txt")),
            context_overrides: Some(dir.join("context_overrides.tsv")),
            affix_overrides: Some(dir.join("affix_overrides.tsv")),
        }
    }
}

fn parse_signed(field: &str, term: &str, source: &str, line: usize) -> Result<f64> {
    let v = parse_f64(field, source, line, "signed_score")?;
    if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
        return Err(Error::Validation {
            term: term.to_string(),
            line: Some(line),
            reason: format!("signed score {v} outside [-1, 1]"),
        });
    }
    Ok(v)
}

fn expect_cols<'a>(line: &'a str, n: usize, source: &str, line_no: usize) -> Result<Vec<&'a str>> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != n {
        return Err(Error::parse(
            source,
            line_no,
            format!("expected {n} tab-separated columns, found {}", cols.len()),
        ));
    }
    Ok(cols)
}

fn folded_key(raw: &str, line: usize) -> Result<String> {
    let term = fold_term(raw.trim());
    check_term(&term, Some(line))?;
    Ok(term)
}

impl AuxLists {
    pub fn parse_informal_dict(text: &str, source: &str) -> Result<BTreeMap<String, String>> {
        let mut dict = BTreeMap::new();
        for (line_no, line) in data_lines(text) {
            let cols = expect_cols(line, 2, source, line_no)?;
            let informal = folded_key(cols[0], line_no)?;
            let formal = folded_key(cols[1], line_no)?;
            dict.insert(informal, formal);
        }
        Ok(dict)
    }

    pub fn parse_word_list(text: &str, source: &str) -> Result<BTreeSet<String>> {
        let mut set = BTreeSet::new();
        for (line_no, line) in data_lines(text) {
            let cols = expect_cols(line, 1, source, line_no)?;
            set.insert(folded_key(cols[0], line_no)?);
        }
        Ok(set)
    }

    pub fn parse_context_overrides(
        text: &str,
        source: &str,
    ) -> Result<BTreeMap<(String, String), f64>> {
        let mut map = BTreeMap::new();
        for (line_no, line) in data_lines(text) {
            let cols = expect_cols(line, 3, source, line_no)?;
            let context = folded_key(cols[0], line_no)?;
            let target = folded_key(cols[1], line_no)?;
            let score = parse_signed(cols[2], &target, source, line_no)?;
            map.insert((context, target), score);
        }
        Ok(map)
    }

    pub fn parse_affix_overrides(text: &str, source: &str) -> Result<BTreeMap<String, f64>> {
        let mut map = BTreeMap::new();
        for (line_no, line) in data_lines(text) {
            let cols = expect_cols(line, 2, source, line_no)?;
            let term = folded_key(cols[0], line_no)?;
            let score = parse_signed(cols[1], &term, source, line_no)?;
            map.insert(term, score);
        }
        Ok(map)
    }

    /// The word lists shipped with the crate.
    pub fn bundled() -> Self {
        let aux = AuxLists {
            informal_dict: Self::parse_informal_dict(
                include_str!("../data/informal.tsv"),
                "informal.tsv",
            )
            .expect("bundled informal dictionary is valid"),
            negations: Self::parse_word_list(
                include_str!("../data/negations.txt"),
                "negations.txt",
            )
            .expect("bundled negations are valid"),
            interjections: Self::parse_word_list(
                include_str!("../data/interjections.txt"),
                "interjections.txt",
            )
            .expect("bundled interjections are valid"),
            question_words: Self::parse_word_list(
                include_str!("../data/question_words.txt"),
                "question_words.txt",
            )
            .expect("bundled question words are valid"),
            context_overrides: Self::parse_context_overrides(
                include_str!("../data/context_overrides.tsv"),
                "context_overrides.tsv",
            )
            .expect("bundled context overrides are valid"),
            affix_overrides: Self::parse_affix_overrides(
                include_str!("../data/affix_overrides.tsv"),
                "affix_overrides.tsv",
            )
            .expect("bundled affix overrides are valid"),
        };
        debug_assert!(crate::normalizer::non_fixed_formal_terms(&aux.informal_dict).is_empty());
        aux
    }

    pub fn informal_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.informal_dict {
            out.push_str(&format!("{k}\t{v}\n"));
        }
        out
    }

    pub fn context_tsv(&self) -> String {
        let mut out = String::new();
        for ((c, t), s) in &self.context_overrides {
            out.push_str(&format!("{c}\t{t}\t{s}\n"));
        }
        out
    }

    pub fn affix_tsv(&self) -> String {
        let mut out = String::new();
        for (t, s) in &self.affix_overrides {
            out.push_str(&format!("{t}\t{s}\n"));
        }
        out
    }

    /// Writes every list under its standard name (see [`AuxPaths::in_dir`]).
    pub fn save_to_dir(&self, dir: &Path) -> Result<()> {
        let list =
            |set: &BTreeSet<String>| set.iter().map(|w| format!("{w}\n")).collect::<String>();
        let files = [
            ("informal.tsv", self.informal_tsv()),
            ("negations.txt", list(&self.negations)),
            ("interjections.txt", list(&self.interjections)),
            ("question_words.txt", list(&self.question_words)),
            ("context_overrides.tsv", self.context_tsv()),
            ("affix_overrides.tsv", self.affix_tsv()),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Loads whichever lists `paths` names.
///
/// Informal-dictionary values that the normalizer would still rewrite are
/// reported with a warning, since they break normalization idempotence.
pub fn load_aux_lists(paths: &AuxPaths) -> Result<AuxLists> {
    overlay_aux_lists(AuxLists::default(), paths)
}

/// Replaces each list of `base` whose path is given in `paths`.
pub fn overlay_aux_lists(base: AuxLists, paths: &AuxPaths) -> Result<AuxLists> {
    fn load<T>(
        path: &Option<PathBuf>,
        base: T,
        parse: impl Fn(&str, &str) -> Result<T>,
    ) -> Result<T> {
        match path {
            Some(p) => parse(&read(p)?, &p.display().to_string()),
            None => Ok(base),
        }
    }

    let aux = AuxLists {
        informal_dict: load(
            &paths.informal_dict,
            base.informal_dict,
            AuxLists::parse_informal_dict,
        )?,
        negations: load(&paths.negations, base.negations, AuxLists::parse_word_list)?,
        interjections: load(
            &paths.interjections,
            base.interjections,
            AuxLists::parse_word_list,
        )?,
        question_words: load(
            &paths.question_words,
            base.question_words,
            AuxLists::parse_word_list,
        )?,
        context_overrides: load(
            &paths.context_overrides,
            base.context_overrides,
            AuxLists::parse_context_overrides,
        )?,
        affix_overrides: load(
            &paths.affix_overrides,
            base.affix_overrides,
            AuxLists::parse_affix_overrides,
        )?,
    };
    for term in crate::normalizer::non_fixed_formal_terms(&aux.informal_dict) {
        log::warn!("informal dictionary value '{term}' is not a normalization fixed point");
    }
    Ok(aux)
}
