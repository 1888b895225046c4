//! Preprocessing of noisy social-media text.
//!
//! Order is fixed: tokenize, convert numerics, collapse vowel runs, then
//! translate informal words. Vowel runs must be collapsed before dictionary
//! lookup so that elongated slang ("cemunguuudh") meets its dictionary key.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::lexicon::AuxLists;

/// Ordered, lowercased, whitespace-free, non-empty tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSeq(Vec<String>);

impl TokenSeq {
    /// Builds a sequence from already-clean words, dropping empty ones and
    /// splitting any that contain whitespace.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        TokenSeq(
            words
                .iter()
                .flat_map(|w| w.as_ref().split_whitespace())
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn join(&self) -> String {
        self.0.join(" ")
    }
}

impl Deref for TokenSeq {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerConfig {
    /// Runs of at least this many identical vowels collapse to one. Must be >= 2.
    pub vowel_run_threshold: usize,
}

impl Default for NormalizerConfig {
    fn default() -> Self {
        NormalizerConfig {
            vowel_run_threshold: 3,
        }
    }
}

fn is_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

/// Whitespace split, lowercase, and edge-punctuation stripping.
///
/// Tokens made only of punctuation are kept whole, as are emoticon-shaped
/// tokens that start with punctuation and have at most one alphanumeric
/// character after it (":p", ":D", ";3").
pub fn tokenize(text: &str) -> TokenSeq {
    let text: String = text.nfc().collect();
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        let lowered = raw.to_lowercase();
        let core = lowered.trim_matches(is_punct);
        let emoticon = lowered.starts_with(is_punct) && core.chars().count() <= 1;
        if core.is_empty() || emoticon {
            tokens.push(lowered);
        } else {
            tokens.push(core.to_string());
        }
    }
    TokenSeq(tokens)
}

fn leet(c: char) -> Option<char> {
    match c {
        '0' => Some('o'),
        '1' => Some('i'),
        '3' => Some('e'),
        '4' => Some('a'),
        '5' => Some('s'),
        '7' => Some('t'),
        _ => None,
    }
}

/// Rewrites digits used as letters.
///
/// A '2' preceded by at least two letters repeats those two letters
/// ("ga2l" → "gagal"); otherwise it is kept. Other digits go through the
/// leet table. Pure numbers are returned unchanged.
pub fn convert_numerics(token: &str) -> String {
    if token.is_empty() || token.chars().all(|c| c.is_ascii_digit()) {
        return token.to_string();
    }
    let mut out: Vec<char> = Vec::with_capacity(token.len() + 2);
    for c in token.chars() {
        if c == '2' {
            let run = out.iter().rev().take_while(|c| c.is_alphabetic()).count();
            if run >= 2 {
                let pair = [out[out.len() - 2], out[out.len() - 1]];
                out.extend_from_slice(&pair);
            } else {
                out.push('2');
            }
            continue;
        }
        out.push(leet(c).unwrap_or(c));
    }
    out.into_iter().collect()
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

pub fn collapse_vowel_runs(token: &str) -> String {
    collapse_vowel_runs_with(token, NormalizerConfig::default().vowel_run_threshold)
}

/// Replaces each run of `threshold` or more identical vowels with one vowel.
pub fn collapse_vowel_runs_with(token: &str, threshold: usize) -> String {
    let threshold = threshold.max(2);
    let chars: Vec<char> = token.chars().collect();
    let mut out = String::with_capacity(token.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i + 1;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        let run = j - i;
        if is_vowel(c) && run >= threshold {
            out.push(c);
        } else {
            out.extend(&chars[i..j]);
        }
        i = j;
    }
    out
}

/// One dictionary pass; no chaining through the dictionary.
pub fn translate_informal(tokens: TokenSeq, dict: &BTreeMap<String, String>) -> TokenSeq {
    TokenSeq(
        tokens
            .0
            .into_iter()
            .map(|t| match dict.get(&t) {
                Some(formal) => formal.clone(),
                None => t,
            })
            .collect(),
    )
}

pub fn normalize(text: &str, aux: &AuxLists) -> TokenSeq {
    normalize_with(text, aux, &NormalizerConfig::default())
}

pub fn normalize_with(text: &str, aux: &AuxLists, config: &NormalizerConfig) -> TokenSeq {
    let tokens = tokenize(text);
    let cleaned = TokenSeq(
        tokens
            .0
            .into_iter()
            .map(|t| collapse_vowel_runs_with(&convert_numerics(&t), config.vowel_run_threshold))
            .collect(),
    );
    translate_informal(cleaned, &aux.informal_dict)
}

/// Formal values in `dict` that normalization would still rewrite: values that
/// are themselves keys, or that tokenizing, numeric conversion, or vowel
/// collapsing would change.
pub fn non_fixed_formal_terms(dict: &BTreeMap<String, String>) -> Vec<String> {
    let mut bad: Vec<String> = dict
        .values()
        .filter(|v| {
            let tokens = tokenize(v);
            dict.contains_key(v.as_str())
                || tokens.len() != 1
                || tokens[0] != **v
                || collapse_vowel_runs(&convert_numerics(v)) != **v
        })
        .cloned()
        .collect();
    bad.sort();
    bad.dedup();
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dict(pairs: &[(&str, &str)]) -> AuxLists {
        AuxLists {
            informal_dict: pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn tokenize_strips_edge_punctuation() {
        assert_eq!(
            tokenize("Pasangan Rieke!").into_inner(),
            vec!["pasangan", "rieke"]
        );
        assert_eq!(
            tokenize("wah... cantik").into_inner(),
            vec!["wah", "cantik"]
        );
    }

    #[test]
    fn tokenize_keeps_emoticons() {
        assert_eq!(tokenize(":p").into_inner(), vec![":p"]);
        assert_eq!(
            tokenize("keren :) ...").into_inner(),
            vec!["keren", ":)", "..."]
        );
        assert_eq!(
            tokenize("Men, lu ganteng. :P").into_inner(),
            vec!["men", "lu", "ganteng", ":p"]
        );
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t ").is_empty());
    }

    #[test]
    fn numerics() {
        assert_eq!(convert_numerics("ga2l"), "gagal");
        assert_eq!(convert_numerics("2013"), "2013");
        assert_eq!(convert_numerics("b4gus"), "bagus");
        assert_eq!(convert_numerics("h3b4t"), "hebat");
        // fewer than two letters before the '2'
        assert_eq!(convert_numerics("a2"), "a2");
        assert_eq!(convert_numerics("2an"), "2an");
    }

    #[test]
    fn vowel_runs() {
        assert_eq!(collapse_vowel_runs("cemunguuudh"), "cemungudh");
        assert_eq!(collapse_vowel_runs("maaf"), "maaf");
        assert_eq!(collapse_vowel_runs("baguuuuus"), "bagus");
        assert_eq!(collapse_vowel_runs("hmmmm"), "hmmmm");
        assert_eq!(collapse_vowel_runs_with("maaf", 2), "maf");
    }

    #[test]
    fn informal_translation_is_single_pass() {
        let aux = dict(&[
            ("cemungudh", "semangat"),
            ("ga", "tidak"),
            ("a", "b"),
            ("b", "c"),
        ]);
        let t = translate_informal(TokenSeq::from_words(&["cemungudh"]), &aux.informal_dict);
        assert_eq!(t.into_inner(), vec!["semangat"]);
        let t = translate_informal(TokenSeq::from_words(&["semangat"]), &aux.informal_dict);
        assert_eq!(t.into_inner(), vec!["semangat"]);
        let t = translate_informal(
            TokenSeq::from_words(&["ga", "cemungudh"]),
            &aux.informal_dict,
        );
        assert_eq!(t.into_inner(), vec!["tidak", "semangat"]);
        let t = translate_informal(TokenSeq::from_words(&["a"]), &aux.informal_dict);
        assert_eq!(t.into_inner(), vec!["b"]);
    }

    #[test]
    fn full_normalize() {
        let aux = dict(&[("cemungudh", "semangat")]);
        assert_eq!(
            normalize("cemunguuudh!", &aux).into_inner(),
            vec!["semangat"]
        );
        assert_eq!(normalize("ga2l", &aux).into_inner(), vec!["gagal"]);
        assert_eq!(normalize("GAGAL", &aux).into_inner(), vec!["gagal"]);
    }

    #[test]
    fn non_fixed_values_are_reported() {
        let d: BTreeMap<String, String> = [("x", "y"), ("y", "z"), ("p", "baaaagus"), ("q", "b4")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(non_fixed_formal_terms(&d), vec!["b4", "baaaagus", "y"]);
        assert!(non_fixed_formal_terms(&AuxLists::bundled().informal_dict).is_empty());
    }

    proptest! {
        #[test]
        fn collapse_never_grows_and_leaves_no_triple(s in "[aeioubcdg]{0,20}") {
            let out = collapse_vowel_runs(&s);
            prop_assert!(out.chars().count() <= s.chars().count());
            for v in ["aaa", "eee", "iii", "ooo", "uuu"] {
                prop_assert!(!out.contains(v));
            }
        }

        #[test]
        fn normalize_is_idempotent(s in "[a-zA-Z0-9 .,!?:()]{0,40}") {
            let aux = AuxLists::bundled();
            let once = normalize(&s, &aux);
            let twice = normalize(&once.join(), &aux);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn tokens_are_clean_and_translation_is_one_to_one(s in "\\PC{0,40}") {
            let aux = AuxLists::bundled();
            let before = tokenize(&s);
            let out = normalize(&s, &aux);
            prop_assert_eq!(before.len(), out.len());
            for t in out.iter() {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }
    }
}
