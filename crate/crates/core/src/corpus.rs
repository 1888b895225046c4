//! Labeled documents and the JSONL corpus format.
//!
//! One JSON object per line:
//! `{"text": str, "topic": str|null, "sentiment": "pos"|"neg"|"neu"|null, "sarcasm": bool|null}`.

use std::fmt;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sentiment {
    #[serde(rename = "neu")]
    Neutral,
    #[serde(rename = "pos")]
    Positive,
    #[serde(rename = "neg")]
    Negative,
}

impl Sentiment {
    /// Stage-1 class order. Index 0 wins ties.
    pub const ALL: [Sentiment; 3] = [Sentiment::Neutral, Sentiment::Positive, Sentiment::Negative];

    pub fn index(self) -> usize {
        match self {
            Sentiment::Neutral => 0,
            Sentiment::Positive => 1,
            Sentiment::Negative => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn code(self) -> &'static str {
        match self {
            Sentiment::Neutral => "neu",
            Sentiment::Positive => "pos",
            Sentiment::Negative => "neg",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Sentiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neu" | "neutral" => Ok(Sentiment::Neutral),
            "pos" | "positive" => Ok(Sentiment::Positive),
            "neg" | "negative" => Ok(Sentiment::Negative),
            other => Err(Error::Config(format!("unknown sentiment '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub text: String,
    #[serde(default)]
    pub topic: Option<String>,
    #[serde(default)]
    pub sentiment: Option<Sentiment>,
    #[serde(default)]
    pub sarcasm: Option<bool>,
}

impl Document {
    pub fn new(text: impl Into<String>) -> Self {
        Document {
            text: text.into(),
            topic: None,
            sentiment: None,
            sarcasm: None,
        }
    }

    pub fn with_topic(mut self, topic: impl Into<String>) -> Self {
        self.topic = Some(topic.into());
        self
    }

    pub fn with_sentiment(mut self, sentiment: Sentiment) -> Self {
        self.sentiment = Some(sentiment);
        self
    }

    pub fn with_sarcasm(mut self, sarcasm: bool) -> Self {
        self.sarcasm = Some(sarcasm);
        self
    }

    /// Gold label after sarcasm resolution: a sarcastic positive counts as negative.
    pub fn resolved_label(&self) -> Option<Sentiment> {
        match (self.sentiment?, self.sarcasm) {
            (Sentiment::Positive, Some(true)) => Some(Sentiment::Negative),
            (s, _) => Some(s),
        }
    }
}

pub fn parse_jsonl(text: &str, source: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(line).map_err(|e| Error::parse(source, i + 1, e.to_string()))?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Document>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&text, &path.display().to_string())
}

pub fn read_jsonl_from(reader: impl BufRead, source: &str) -> Result<Vec<Document>> {
    let mut text = String::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(source, e))?;
        text.push_str(&line);
        text.push('\n');
    }
    parse_jsonl(&text, source)
}

pub fn to_jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for d in docs {
        out.push_str(&serde_json::to_string(d).expect("documents serialize"));
        out.push('\n');
    }
    out
}

pub fn write_jsonl(path: &Path, docs: &[Document]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(to_jsonl(docs).as_bytes())
        .map_err(|e| Error::io(path, e))
}
