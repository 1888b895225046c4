use rand::seq::SliceRandom;

use crate::corpus::{Document, Sentiment};
use crate::error::{Error, Result};
use crate::seed;

/// Stratified train/test split.
///
/// Each sentiment class is shuffled on its own stream and its first
/// `round(fraction × class size)` members go to training. Both halves keep
/// the corpus order.
pub fn split(
    corpus: &[Document],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<Document>, Vec<Document>)> {
    let (train, test) = split_indices(corpus, train_fraction, seed)?;
    Ok((
        train.into_iter().map(|i| corpus[i].clone()).collect(),
        test.into_iter().map(|i| corpus[i].clone()).collect(),
    ))
}

pub fn split_indices(
    corpus: &[Document],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(Error::Config(format!(
            "train fraction must lie in [0, 1], got {train_fraction}"
        )));
    }
    let mut strata: [Vec<usize>; 3] = Default::default();
    for (i, d) in corpus.iter().enumerate() {
        let s = d.sentiment.ok_or(Error::MissingField {
            doc: i,
            field: "sentiment",
        })?;
        strata[s.index()].push(i);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (s, mut members) in Sentiment::ALL.iter().zip(strata) {
        let mut rng = seed::rng(seed, &format!("split/{}", s.code()));
        members.shuffle(&mut rng);
        let n_train = (train_fraction * members.len() as f64).round() as usize;
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(neu: usize, pos: usize, neg: usize) -> Vec<Document> {
        let mk = |s, n| (0..n).map(move |i| Document::new(format!("{s} {i}")).with_sentiment(s));
        mk(Sentiment::Neutral, neu)
            .chain(mk(Sentiment::Positive, pos))
            .chain(mk(Sentiment::Negative, neg))
            .collect()
    }

    #[test]
    fn full_fraction_leaves_test_empty() {
        let (train, test) = split(&corpus(5, 3, 2), 1.0, 0).unwrap();
        assert_eq!(train.len(), 10);
        assert!(test.is_empty());
    }

    #[test]
    fn class_proportions_hold_within_one_document() {
        let c = corpus(702, 310, 268);
        let f = 980.0 / 1280.0;
        let (train, test) = split_indices(&c, f, 42).unwrap();
        assert_eq!(train.len() + test.len(), 1280);
        let count =
            |idx: &[usize], s| idx.iter().filter(|&&i| c[i].sentiment == Some(s)).count() as f64;
        for (s, n) in [
            (Sentiment::Neutral, 702.0),
            (Sentiment::Positive, 310.0),
            (Sentiment::Negative, 268.0),
        ] {
            assert!((count(&train, s) - f * n).abs() <= 1.0, "{s}");
            assert!((count(&test, s) - (1.0 - f) * n).abs() <= 1.0, "{s}");
        }
    }

    #[test]
    fn disjoint_exhaustive_and_deterministic() {
        let c = corpus(40, 17, 9);
        let (a, b) = split_indices(&c, 0.7, 3).unwrap();
        let mut all: Vec<_> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..c.len()).collect::<Vec<_>>());
        assert_eq!(split_indices(&c, 0.7, 3).unwrap(), (a.clone(), b));
        assert_ne!(split_indices(&c, 0.7, 4).unwrap().0, a);
    }

    #[test]
    fn unlabeled_or_bad_fraction_is_an_error() {
        let mut c = corpus(2, 2, 2);
        assert!(split(&c, 1.5, 0).is_err());
        c.push(Document::new("x"));
        assert!(split(&c, 0.5, 0).is_err());
    }
}
