//! Ensemble sentiment scoring of caption sentences.
//!
//! Each scorer in the ensemble maps a sentence to a polarity in
//! {−1, 0, +1}; a sentence's sentiment is the vector of all K scorer
//! outputs together with their sum. Scorers are pluggable behind
//! [`PolarityScorer`]; two lexicon-backed scorers ship built in — a
//! general polarity word list and a news-toned one — so ensembles
//! exhibit real disagreement out of the box.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::caption::Sentence;

/// A single scorer's verdict on one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

impl Polarity {
    /// The numeric score: −1, 0 or +1.
    pub fn value(self) -> i32 {
        match self {
            Polarity::Negative => -1,
            Polarity::Neutral => 0,
            Polarity::Positive => 1,
        }
    }

    fn from_count_difference(difference: i64) -> Self {
        match difference {
            d if d > 0 => Polarity::Positive,
            d if d < 0 => Polarity::Negative,
            _ => Polarity::Neutral,
        }
    }
}

impl serde::Serialize for Polarity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.value() as i8)
    }
}

impl<'de> serde::Deserialize<'de> for Polarity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match i8::deserialize(deserializer)? {
            -1 => Ok(Polarity::Negative),
            0 => Ok(Polarity::Neutral),
            1 => Ok(Polarity::Positive),
            other => Err(serde::de::Error::custom(alloc::format!(
                "polarity must be -1, 0 or 1, got {other}"
            ))),
        }
    }
}

/// Anything that can judge sentence text as positive, neutral or
/// negative. Implementations must be deterministic and total: the
/// same text always yields the same polarity, and no valid text may
/// fail.
pub trait PolarityScorer: Send + Sync {
    fn name(&self) -> &str;
    fn score(&self, text: &str) -> Polarity;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SentimentError {
    #[error("an ensemble needs at least one scorer")]
    EmptyEnsemble,
    #[error("a lexicon needs at least one term")]
    EmptyLexicon,
    #[error("term {0:?} appears in both the positive and negative lists")]
    ConflictingTerm(String),
}

/// Two disjoint sets of lowercase polarity words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
}

impl Lexicon {
    /// Build a lexicon from word collections. Words are lowercased;
    /// a word on both sides is rejected, as is an empty union.
    pub fn new<P, N>(positive: P, negative: N) -> Result<Self, SentimentError>
    where
        P: IntoIterator,
        N: IntoIterator,
        P::Item: AsRef<str>,
        N::Item: AsRef<str>,
    {
        let lower = |w: &str| w.trim().to_lowercase();
        let positive: BTreeSet<String> =
            positive.into_iter().map(|w| lower(w.as_ref())).filter(|w| !w.is_empty()).collect();
        let negative: BTreeSet<String> =
            negative.into_iter().map(|w| lower(w.as_ref())).filter(|w| !w.is_empty()).collect();
        if positive.is_empty() && negative.is_empty() {
            return Err(SentimentError::EmptyLexicon);
        }
        if let Some(shared) = positive.intersection(&negative).next() {
            return Err(SentimentError::ConflictingTerm(shared.clone()));
        }
        Ok(Self { positive, negative })
    }

    /// Build from the word-list file format: one word per line,
    /// blank lines ignored.
    pub fn from_word_lists(positive: &str, negative: &str) -> Result<Self, SentimentError> {
        Self::new(positive.lines(), negative.lines())
    }

    /// Polarity of a text: tokenize on non-letter boundaries,
    /// lowercase, count positive and negative hits, return the sign
    /// of the difference.
    pub fn polarity(&self, text: &str) -> Polarity {
        let mut difference: i64 = 0;
        for token in tokens(text) {
            if self.positive.contains(&token) {
                difference += 1;
            } else if self.negative.contains(&token) {
                difference -= 1;
            }
        }
        Polarity::from_count_difference(difference)
    }

    pub fn term_count(&self) -> usize {
        self.positive.len() + self.negative.len()
    }
}

/// Lowercased alphabetic tokens of a text, split at every non-letter.
fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphabetic()).filter(|t| !t.is_empty()).map(str::to_lowercase)
}

/// A [`PolarityScorer`] backed by a [`Lexicon`].
#[derive(Debug, Clone)]
pub struct LexiconScorer {
    name: String,
    lexicon: Lexicon,
}

impl LexiconScorer {
    pub fn new(name: &str, lexicon: Lexicon) -> Self {
        Self { name: name.to_owned(), lexicon }
    }

    /// Bundled general-purpose polarity word list.
    pub fn general() -> Self {
        let lexicon = Lexicon::from_word_lists(
            include_str!("../data/lexicons/general/positive.txt"),
            include_str!("../data/lexicons/general/negative.txt"),
        )
        .expect("bundled general lexicon is valid");
        Self::new("general", lexicon)
    }

    /// Bundled news-toned word list: disaster/conflict vocabulary on
    /// the negative side, recovery/diplomacy vocabulary on the
    /// positive side.
    pub fn news_tone() -> Self {
        let lexicon = Lexicon::from_word_lists(
            include_str!("../data/lexicons/news-tone/positive.txt"),
            include_str!("../data/lexicons/news-tone/negative.txt"),
        )
        .expect("bundled news-tone lexicon is valid");
        Self::new("news-tone", lexicon)
    }
}

impl PolarityScorer for LexiconScorer {
    fn name(&self) -> &str {
        &self.name
    }

    fn score(&self, text: &str) -> Polarity {
        self.lexicon.polarity(text)
    }
}

/// One sentence's scores from all K scorers of an ensemble, plus
/// their sum in [−K, +K].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SentimentVector {
    pub scores: Vec<Polarity>,
    pub sum: i32,
}

impl SentimentVector {
    pub fn new(scores: Vec<Polarity>) -> Self {
        let sum = scores.iter().map(|p| p.value()).sum();
        Self { scores, sum }
    }
}

/// A fixed, ordered collection of K ≥ 1 scorers applied to every
/// sentence of a run.
pub struct ScorerEnsemble {
    scorers: Vec<Box<dyn PolarityScorer>>,
}

impl ScorerEnsemble {
    pub fn new(scorers: Vec<Box<dyn PolarityScorer>>) -> Result<Self, SentimentError> {
        if scorers.is_empty() {
            return Err(SentimentError::EmptyEnsemble);
        }
        Ok(Self { scorers })
    }

    /// The two bundled lexicon scorers.
    pub fn builtin() -> Self {
        Self::new(alloc::vec![
            Box::new(LexiconScorer::general()) as Box<dyn PolarityScorer>,
            Box::new(LexiconScorer::news_tone()),
        ])
        .expect("two scorers is a valid ensemble")
    }

    /// K, the number of scorers.
    pub fn size(&self) -> usize {
        self.scorers.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.scorers.iter().map(|s| s.name()).collect()
    }

    pub fn score_text(&self, text: &str) -> SentimentVector {
        SentimentVector::new(self.scorers.iter().map(|s| s.score(text)).collect())
    }

    pub fn score_sentence(&self, sentence: &Sentence) -> SentimentVector {
        self.score_text(&sentence.text)
    }

    /// Score every sentence, preserving order. An empty input (for
    /// example a video without captions) yields an empty list, which
    /// downstream fusion treats as zero sentiment evidence.
    pub fn score_captions(&self, sentences: Vec<Sentence>) -> Vec<(Sentence, SentimentVector)> {
        sentences
            .into_iter()
            .map(|sentence| {
                let vector = self.score_sentence(&sentence);
                (sentence, vector)
            })
            .collect()
    }
}

impl core::fmt::Debug for ScorerEnsemble {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ScorerEnsemble").field("scorers", &self.names()).finish()
    }
}
