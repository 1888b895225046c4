//! Template-based synthetic corpus.
//!
//! Recipe, per document:
//!
//! 1. Class counts are exact: the label list holds `neutral` neutral,
//!    `positive` positive and `negative` negative entries and is shuffled.
//!    Exactly `round(sarcasm_rate × positive)` positives, chosen at random,
//!    are sarcastic; non-positive documents carry no sarcasm label.
//! 2. Topic: negative documents pick a topic with weight `weight × lean`,
//!    sarcastic documents the same but among sensitive topics only, and every
//!    other document with weight `weight × (1 − lean)`. The realized
//!    per-topic negativity is reported in [`GeneratedCorpus::topic_negativity`].
//! 3. Clean tokens: an optional question word, a topic noun, filler words,
//!    and for opinion texts one or two sentiment units. A unit is a
//!    polarity word, optionally intensified, or with probability
//!    `negated_rate` a negation followed by a word of the opposite polarity.
//!    Low-score lexicon words ("bisa", "cukup", ...) are sprinkled over all
//!    classes, more densely over neutral ones; neutral texts occasionally
//!    leak one strong sentiment word. Sarcastic texts use the same positive
//!    vocabulary as sincere ones but usually open with an interjection.
//! 4. Surface noise: each token may be rendered with a slang spelling,
//!    vowel elongation, a leet digit, "2" reduplication, uppercase, or
//!    trailing punctuation. Emoticons, appended to some texts, are tokens
//!    of their own. Every rendering normalizes back to the clean token, so
//!    `normalize(text)` equals [`GeneratedCorpus::clean_tokens`] exactly.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Sentiment};
use crate::error::{Error, Result};
use crate::lexicon::AuxLists;
use crate::normalizer::TokenSeq;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSpec {
    pub name: String,
    pub nouns: Vec<String>,
    pub weight: f64,
    /// Share of the topic's draw weight that goes to negative documents.
    pub lean: f64,
    /// Sarcastic documents are only placed in sensitive topics.
    pub sensitive: bool,
}

impl TopicSpec {
    fn new(name: &str, nouns: &[&str], lean: f64, sensitive: bool) -> Self {
        TopicSpec {
            name: name.into(),
            nouns: nouns.iter().map(|s| s.to_string()).collect(),
            weight: 1.0,
            lean,
            sensitive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub neutral: usize,
    pub positive: usize,
    pub negative: usize,
    pub sarcasm_rate: f64,
    pub negated_rate: f64,
    pub neutral_weak_rate: f64,
    pub opinion_weak_rate: f64,
    pub leak_rate: f64,
    pub sarcastic_interjection_rate: f64,
    pub interjection_rate: f64,
    pub neutral_question_rate: f64,
    pub opinion_question_rate: f64,
    /// Per-token probability of a noisy surface rendering.
    pub noise_rate: f64,
    pub topics: Vec<TopicSpec>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            neutral: 502,
            positive: 250,
            negative: 228,
            sarcasm_rate: 0.4,
            negated_rate: 0.35,
            neutral_weak_rate: 0.6,
            opinion_weak_rate: 0.3,
            leak_rate: 0.12,
            sarcastic_interjection_rate: 0.6,
            interjection_rate: 0.12,
            neutral_question_rate: 0.5,
            opinion_question_rate: 0.1,
            noise_rate: 0.25,
            topics: vec![
                TopicSpec::new(
                    "politik",
                    &["partai", "presiden", "pemilu", "menteri"],
                    0.75,
                    true,
                ),
                TopicSpec::new("rhoma", &["rhoma", "dangdut", "konser"], 0.8, true),
                TopicSpec::new(
                    "telkomsel",
                    &["sinyal", "pulsa", "kuota", "jaringan"],
                    0.7,
                    true,
                ),
                TopicSpec::new("polri", &["polisi", "tilang", "polantas"], 0.7, true),
                TopicSpec::new(
                    "makanan",
                    &["bakso", "sate", "rendang", "warung"],
                    0.15,
                    false,
                ),
                TopicSpec::new(
                    "film",
                    &["film", "bioskop", "sutradara", "aktor"],
                    0.25,
                    false,
                ),
                TopicSpec::new("kesehatan", &["dokter", "vaksin", "rumah"], 0.1, false),
                TopicSpec::new(
                    "liburan",
                    &["pantai", "hotel", "wisata", "pulau"],
                    0.15,
                    false,
                ),
            ],
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let unit = [
            ("sarcasm_rate", self.sarcasm_rate),
            ("negated_rate", self.negated_rate),
            ("neutral_weak_rate", self.neutral_weak_rate),
            ("opinion_weak_rate", self.opinion_weak_rate),
            ("leak_rate", self.leak_rate),
            (
                "sarcastic_interjection_rate",
                self.sarcastic_interjection_rate,
            ),
            ("interjection_rate", self.interjection_rate),
            ("neutral_question_rate", self.neutral_question_rate),
            ("opinion_question_rate", self.opinion_question_rate),
            ("noise_rate", self.noise_rate),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.topics.is_empty() {
            return Err(Error::Config("corpus spec needs at least one topic".into()));
        }
        for t in &self.topics {
            if t.nouns.is_empty()
                || t.weight.is_nan()
                || t.weight <= 0.0
                || !(0.0..=1.0).contains(&t.lean)
            {
                return Err(Error::Config(format!(
                    "topic '{}' needs nouns, a positive weight and a lean in [0, 1]",
                    t.name
                )));
            }
        }
        if self.sarcastic_count() > 0 && !self.topics.iter().any(|t| t.sensitive && t.lean > 0.0) {
            return Err(Error::Config(
                "sarcastic documents need a sensitive topic with positive lean".into(),
            ));
        }
        Ok(())
    }

    pub fn sarcastic_count(&self) -> usize {
        (self.sarcasm_rate * self.positive as f64).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedCorpus {
    pub documents: Vec<Document>,
    /// What normalization must return for each document.
    pub clean_tokens: Vec<TokenSeq>,
    /// Realized fraction of negative documents per topic.
    pub topic_negativity: BTreeMap<String, f64>,
}

const POSITIVE: &[&str] = &[
    "bagus", "hebat", "cantik", "keren", "cocok", "mantap", "senang", "suka", "enak", "lezat",
    "indah", "jago", "pintar", "ramah", "puas", "semangat", "murah", "menarik", "sukses",
    "berhasil",
];
const NEGATIVE: &[&str] = &[
    "buruk", "jelek", "kecewa", "parah", "mahal", "bosan", "benci", "lambat", "gagal", "payah",
    "bodoh", "rusak", "korupsi", "bohong", "sedih", "marah", "lemah",
];
const WEAK: &[&str] = &[
    "bisa", "cukup", "baru", "besar", "berbeda", "lama", "kecil", "biasa",
];
const NEGATORS: &[&str] = &["tidak", "tidak", "tidak", "bukan", "kurang", "tak"];
const PRE_INTENSIFIERS: &[&str] = &["sangat", "paling", "terlalu"];
const POST_INTENSIFIERS: &[&str] = &["banget", "sekali"];
const SOFTENERS: &[&str] = &["terlalu", "begitu", "juga"];
const SUBJECTS: &[&str] = &["saya", "kita", "mereka", "orang"];
const FILLERS: &[&str] = &[
    "hari", "ini", "itu", "yang", "dan", "sudah", "akan", "dengan", "untuk", "karena", "juga",
    "lagi", "masih", "tadi", "besok", "sama", "di", "ke", "dari", "pagi", "malam", "tapi",
    "memang", "jadi",
];
const INTERJECTIONS: &[&str] = &[
    "wow", "wah", "aha", "nah", "wew", "yay", "duh", "cie", "hore", "astaga",
];
const QUESTIONS: &[&str] = &[
    "siapa",
    "apa",
    "kapan",
    "bagaimana",
    "dimana",
    "mengapa",
    "kenapa",
    "berapa",
];
const EMOTICONS: &[&str] = &[":)", ":(", ":d", "^_^", ":-)"];
const TRAILING: &[&str] = &["!", "!!", "?", "...", ",", "!?"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Neutral,
    Positive { sarcastic: bool },
    Negative,
}

/// Generates a corpus with the bundled resources.
pub fn generate_synthetic_corpus(spec: &CorpusSpec, seed: u64) -> Result<GeneratedCorpus> {
    generate_with(spec, &AuxLists::bundled(), seed)
}

/// Generates a corpus; `aux` supplies the slang spellings used for noise.
pub fn generate_with(spec: &CorpusSpec, aux: &AuxLists, seed: u64) -> Result<GeneratedCorpus> {
    spec.validate()?;
    let mut rng = seed::rng(seed, "synthetic/corpus");

    let mut kinds: Vec<Kind> = Vec::with_capacity(spec.neutral + spec.positive + spec.negative);
    kinds.extend(std::iter::repeat_n(Kind::Neutral, spec.neutral));
    let n_sarcastic = spec.sarcastic_count();
    kinds.extend((0..spec.positive).map(|i| Kind::Positive {
        sarcastic: i < n_sarcastic,
    }));
    kinds.extend(std::iter::repeat_n(Kind::Negative, spec.negative));
    kinds.shuffle(&mut rng);

    let mut slang: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (informal, formal) in &aux.informal_dict {
        slang
            .entry(formal.as_str())
            .or_default()
            .push(informal.as_str());
    }

    let mut documents = Vec::with_capacity(kinds.len());
    let mut clean_tokens = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let topic = pick_topic(&spec.topics, kind, &mut rng);
        let clean = compose(spec, kind, topic, &mut rng);
        let text = render(spec, &clean, &slang, aux, &mut rng);
        let mut doc = Document::new(text).with_topic(topic.name.clone());
        doc = match kind {
            Kind::Neutral => doc.with_sentiment(Sentiment::Neutral),
            Kind::Negative => doc.with_sentiment(Sentiment::Negative),
            Kind::Positive { sarcastic } => doc
                .with_sentiment(Sentiment::Positive)
                .with_sarcasm(sarcastic),
        };
        documents.push(doc);
        clean_tokens.push(TokenSeq::from_words(&clean));
    }

    let mut tally: BTreeMap<String, (u32, u32)> = BTreeMap::new();
    for d in &documents {
        let t = tally
            .entry(d.topic.clone().expect("generated with topic"))
            .or_default();
        t.0 += u32::from(d.sentiment == Some(Sentiment::Negative));
        t.1 += 1;
    }
    let topic_negativity = tally
        .into_iter()
        .map(|(topic, (neg, total))| (topic, f64::from(neg) / f64::from(total)))
        .collect();
    Ok(GeneratedCorpus {
        documents,
        clean_tokens,
        topic_negativity,
    })
}

fn pick_topic<'s>(topics: &'s [TopicSpec], kind: Kind, rng: &mut ChaCha8Rng) -> &'s TopicSpec {
    let weight = |t: &TopicSpec| match kind {
        Kind::Negative => t.weight * t.lean,
        Kind::Positive { sarcastic: true } if !t.sensitive => 0.0,
        Kind::Positive { sarcastic: true } => t.weight * t.lean,
        _ => t.weight * (1.0 - t.lean),
    };
    let total: f64 = topics.iter().map(weight).sum();
    if total <= 0.0 {
        return topics.choose(rng).expect("validated non-empty");
    }
    let mut x = rng.random_range(0.0..total);
    for t in topics {
        let w = weight(t);
        if x < w {
            return t;
        }
        x -= w;
    }
    topics
        .iter()
        .rev()
        .find(|t| weight(t) > 0.0)
        .expect("positive total weight")
}

fn pick<'a>(pool: &[&'a str], rng: &mut ChaCha8Rng) -> &'a str {
    pool.choose(rng).copied().expect("non-empty pool")
}

fn chance(p: f64, rng: &mut ChaCha8Rng) -> bool {
    rng.random_bool(p)
}

/// One sentiment-bearing unit of the given polarity.
fn unit(positive: bool, negated_rate: f64, rng: &mut ChaCha8Rng) -> Vec<String> {
    let (same, opposite) = if positive {
        (POSITIVE, NEGATIVE)
    } else {
        (NEGATIVE, POSITIVE)
    };
    let mut out = Vec::new();
    if chance(negated_rate, rng) {
        out.push(pick(NEGATORS, rng));
        if chance(0.3, rng) {
            out.push(pick(SOFTENERS, rng));
        }
        out.push(pick(opposite, rng));
    } else {
        if chance(0.3, rng) {
            out.push(pick(PRE_INTENSIFIERS, rng));
        }
        out.push(pick(same, rng));
        if chance(0.25, rng) {
            out.push(pick(POST_INTENSIFIERS, rng));
        }
    }
    out.into_iter().map(String::from).collect()
}

fn fillers(n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..n).map(|_| pick(FILLERS, rng).to_string()).collect()
}

fn compose(spec: &CorpusSpec, kind: Kind, topic: &TopicSpec, rng: &mut ChaCha8Rng) -> Vec<String> {
    let interjection_rate = match kind {
        Kind::Positive { sarcastic: true } => spec.sarcastic_interjection_rate,
        _ => spec.interjection_rate,
    };
    let (question_rate, weak_rate) = match kind {
        Kind::Neutral => (spec.neutral_question_rate, spec.neutral_weak_rate),
        _ => (spec.opinion_question_rate, spec.opinion_weak_rate),
    };

    let mut out: Vec<String> = Vec::new();
    if chance(interjection_rate, rng) {
        out.push(pick(INTERJECTIONS, rng).to_string());
        if chance(0.25, rng) {
            out.push(pick(INTERJECTIONS, rng).to_string());
        }
    }
    if chance(question_rate, rng) {
        out.push(pick(QUESTIONS, rng).to_string());
    }
    if chance(0.4, rng) {
        out.push(pick(SUBJECTS, rng).to_string());
    }
    out.push(topic.nouns.choose(rng).expect("validated nouns").clone());
    out.extend(fillers(rng.random_range(1..=3), rng));

    match kind {
        Kind::Neutral => {
            if chance(spec.leak_rate, rng) {
                let pool = if chance(0.5, rng) { POSITIVE } else { NEGATIVE };
                out.push(pick(pool, rng).to_string());
            }
        }
        Kind::Positive { .. } | Kind::Negative => {
            let positive = matches!(kind, Kind::Positive { .. });
            let units = if chance(0.35, rng) { 2 } else { 1 };
            for i in 0..units {
                if i > 0 {
                    out.push(pick(&["dan", "tapi", "juga"], rng).to_string());
                }
                out.extend(unit(positive, spec.negated_rate, rng));
            }
        }
    }
    if chance(weak_rate, rng) {
        let pos = rng.random_range(0..=out.len());
        out.insert(pos, pick(WEAK, rng).to_string());
    }
    if chance(0.5, rng) {
        out.extend(fillers(rng.random_range(1..=2), rng));
    }
    if chance(0.1, rng) {
        out.push(pick(EMOTICONS, rng).to_string());
    }
    out
}

/// Joins noisy renderings of `clean` with single spaces.
fn render(
    spec: &CorpusSpec,
    clean: &[String],
    slang: &BTreeMap<&str, Vec<&str>>,
    aux: &AuxLists,
    rng: &mut ChaCha8Rng,
) -> String {
    let mut words: Vec<String> = clean
        .iter()
        .map(|t| {
            if chance(spec.noise_rate, rng) {
                noisy(t, slang, aux, rng)
            } else {
                t.clone()
            }
        })
        .collect();
    if let Some(first) = words.first_mut() {
        if chance(0.3, rng) {
            *first = capitalize(first);
        }
    }
    if let Some(last) = words
        .last_mut()
        .filter(|w| w.chars().all(char::is_alphabetic))
    {
        if chance(0.4, rng) {
            last.push_str(pick(TRAILING, rng));
        }
    }
    words.join(" ")
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn leet_digit(c: char) -> Option<char> {
    match c {
        'o' => Some('0'),
        'i' => Some('1'),
        'e' => Some('3'),
        'a' => Some('4'),
        's' => Some('5'),
        't' => Some('7'),
        _ => None,
    }
}

/// A spelling of `token` that normalizes back to it.
fn noisy(
    token: &str,
    slang: &BTreeMap<&str, Vec<&str>>,
    aux: &AuxLists,
    rng: &mut ChaCha8Rng,
) -> String {
    let chars: Vec<char> = token.chars().collect();
    if !chars.iter().all(|c| c.is_alphabetic()) || aux.informal_dict.contains_key(token) {
        return token.to_string();
    }
    let mut options: Vec<String> = Vec::new();

    if let Some(keys) = slang.get(token) {
        options.push(keys.choose(rng).expect("non-empty").to_string());
    }

    let lone_vowels: Vec<usize> = (0..chars.len())
        .filter(|&j| {
            is_vowel(chars[j])
                && (j == 0 || chars[j - 1] != chars[j])
                && (j + 1 == chars.len() || chars[j + 1] != chars[j])
        })
        .collect();
    if let Some(&j) = lone_vowels.choose(rng) {
        let extra = rng.random_range(2..=4);
        let mut s: String = chars[..=j].iter().collect();
        s.extend(std::iter::repeat_n(chars[j], extra));
        s.extend(&chars[j + 1..]);
        options.push(s);
    }

    let leetable: Vec<usize> = (0..chars.len())
        .filter(|&j| leet_digit(chars[j]).is_some())
        .collect();
    if !leetable.is_empty() && leetable.len() < chars.len() {
        let mut s = chars.clone();
        for &j in &leetable {
            if chance(0.5, rng) {
                s[j] = leet_digit(chars[j]).expect("leetable");
            }
        }
        if s.iter().any(|c| c.is_alphabetic()) {
            options.push(s.into_iter().collect());
        }
    }

    if let Some(i) =
        (0..chars.len().saturating_sub(3)).find(|&i| chars[i..i + 2] == chars[i + 2..i + 4])
    {
        let mut s: String = chars[..i + 2].iter().collect();
        s.push('2');
        s.extend(&chars[i + 4..]);
        options.push(s);
    }

    options.push(token.to_uppercase());
    options.push(format!("{token}{}", pick(TRAILING, rng)));
    options.choose(rng).expect("non-empty").clone()
}

/// Vocabulary the generator can emit as clean tokens, for consistency checks.
pub fn vocabulary(spec: &CorpusSpec) -> Vec<&str> {
    let mut v: Vec<&str> = [
        POSITIVE,
        NEGATIVE,
        WEAK,
        NEGATORS,
        PRE_INTENSIFIERS,
        POST_INTENSIFIERS,
        SOFTENERS,
        SUBJECTS,
        FILLERS,
        INTERJECTIONS,
        QUESTIONS,
        EMOTICONS,
    ]
    .concat();
    v.extend(
        spec.topics
            .iter()
            .flat_map(|t| t.nouns.iter().map(String::as_str)),
    );
    v.sort_unstable();
    v.dedup();
    v
}
