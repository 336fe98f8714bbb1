//! Sentiment, emotion and the circumstance measure of an event.
//!
//! The circumstance of an event is
//!
//! ```text
//! t = alpha * s + sum_i beta_i * c_i
//! ```
//!
//! where `s` in (0, 1) is the event's sentiment, `c_i` in (0, 1) the
//! confidence of each emotion label attached to it and `beta_i` in [-2, 2]
//! the fixed weight of that label. Sentiment and emotions come either from
//! the bundled lexicons (sentence-level) or from external annotations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{tokenize, Document};
use crate::events::AnnotationRecord;
use crate::participants::EventRecord;

const BUNDLED_SENTIMENT: &str = include_str!("../data/sentiment.tsv");
const BUNDLED_EMOTIONS: &str = include_str!("../data/emotions.tsv");

/// Sentiment scores are kept this far away from 0 and 1.
pub const SENTIMENT_EPSILON: f64 = 0.001;
/// Emotion confidences are kept this far away from 0 and 1.
pub const CONFIDENCE_EPSILON: f64 = 0.001;

#[derive(Debug, Error, PartialEq)]
pub enum ScoringError {
    #[error("emotion label `{0}` has no weight")]
    UnknownLabel(String),
    #[error("unknown emotion label `{label}`; valid labels: {valid}")]
    InvalidLabel { label: String, valid: String },
    #[error("sentiment {0} is outside (0, 1)")]
    SentimentOutOfRange(f64),
    #[error("confidence {confidence} for `{label}` is outside (0, 1)")]
    ConfidenceOutOfRange { label: String, confidence: f64 },
    #[error("alpha {0} is outside (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("weight {beta} for `{label}` is outside [-2, 2]")]
    WeightOutOfRange { label: String, beta: f64 },
    #[error("valence {valence} for `{token}` is outside [-1, 1]")]
    ValenceOutOfRange { token: String, valence: f64 },
    #[error("line {line}: {message}")]
    Lexicon { line: usize, message: String },
}

macro_rules! emotion_labels {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// The 27 fine-grained emotion categories plus `neutral`.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum EmotionLabel { $($variant),* }

        impl EmotionLabel {
            pub const ALL: [EmotionLabel; 28] = [$(EmotionLabel::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(EmotionLabel::$variant => $name),* }
            }
        }

        impl FromStr for EmotionLabel {
            type Err = ScoringError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim().to_lowercase().as_str() {
                    $($name => Ok(EmotionLabel::$variant),)*
                    _ => Err(ScoringError::InvalidLabel {
                        label: s.to_owned(),
                        valid: EmotionLabel::vocabulary(),
                    }),
                }
            }
        }
    };
}

emotion_labels! {
    Admiration => "admiration",
    Amusement => "amusement",
    Anger => "anger",
    Annoyance => "annoyance",
    Approval => "approval",
    Caring => "caring",
    Confusion => "confusion",
    Curiosity => "curiosity",
    Desire => "desire",
    Disappointment => "disappointment",
    Disapproval => "disapproval",
    Disgust => "disgust",
    Embarrassment => "embarrassment",
    Excitement => "excitement",
    Fear => "fear",
    Gratitude => "gratitude",
    Grief => "grief",
    Joy => "joy",
    Love => "love",
    Nervousness => "nervousness",
    Optimism => "optimism",
    Pride => "pride",
    Realization => "realization",
    Relief => "relief",
    Remorse => "remorse",
    Sadness => "sadness",
    Surprise => "surprise",
    Neutral => "neutral",
}

impl EmotionLabel {
    pub fn vocabulary() -> String {
        EmotionLabel::ALL
            .iter()
            .map(|l| l.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionScore {
    pub label: EmotionLabel,
    pub confidence: f64,
}

/// Fixed weight per emotion label, each in [-2, 2].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct EmotionWeights(BTreeMap<EmotionLabel, f64>);

impl Default for EmotionWeights {
    /// Intensity-graded defaults: strong positive emotions +2, mild positive
    /// +1, cognitive/neutral 0, mild negative -1, strong negative -2.
    fn default() -> Self {
        use EmotionLabel::*;
        let table: [(&[EmotionLabel], f64); 5] = [
            (&[Joy, Love, Gratitude, Excitement], 2.0),
            (
                &[
                    Admiration, Amusement, Approval, Caring, Curiosity, Desire, Optimism, Pride, Relief,
                ],
                1.0,
            ),
            (&[Realization, Surprise, Neutral], 0.0),
            (
                &[
                    Annoyance,
                    Confusion,
                    Disappointment,
                    Disapproval,
                    Embarrassment,
                    Nervousness,
                    Remorse,
                ],
                -1.0,
            ),
            (&[Anger, Disgust, Fear, Grief, Sadness], -2.0),
        ];
        let mut map = BTreeMap::new();
        for (labels, beta) in table {
            for &l in labels {
                map.insert(l, beta);
            }
        }
        EmotionWeights(map)
    }
}

impl EmotionWeights {
    pub fn new(map: BTreeMap<EmotionLabel, f64>) -> Result<Self, ScoringError> {
        for (label, &beta) in &map {
            if !(-2.0..=2.0).contains(&beta) {
                return Err(ScoringError::WeightOutOfRange {
                    label: label.to_string(),
                    beta,
                });
            }
        }
        if let Some(&beta) = map.get(&EmotionLabel::Neutral) {
            if beta != 0.0 {
                return Err(ScoringError::WeightOutOfRange {
                    label: "neutral".into(),
                    beta,
                });
            }
        }
        Ok(EmotionWeights(map))
    }

    /// Defaults with the given labels overridden.
    pub fn with_overrides(overrides: &BTreeMap<EmotionLabel, f64>) -> Result<Self, ScoringError> {
        let mut map = Self::default().0;
        map.extend(overrides.iter().map(|(k, v)| (*k, *v)));
        Self::new(map)
    }

    pub fn get(&self, label: EmotionLabel) -> Option<f64> {
        self.0.get(&label).copied()
    }
}

impl TryFrom<BTreeMap<String, f64>> for EmotionWeights {
    type Error = ScoringError;

    fn try_from(raw: BTreeMap<String, f64>) -> Result<Self, Self::Error> {
        let mut map = BTreeMap::new();
        for (k, v) in raw {
            map.insert(k.parse()?, v);
        }
        EmotionWeights::new(map)
    }
}

impl From<EmotionWeights> for BTreeMap<String, f64> {
    fn from(w: EmotionWeights) -> Self {
        w.0.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircumstanceParams {
    alpha: f64,
    pub weights: EmotionWeights,
}

impl Default for CircumstanceParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            weights: EmotionWeights::default(),
        }
    }
}

impl CircumstanceParams {
    pub fn new(alpha: f64, weights: EmotionWeights) -> Result<Self, ScoringError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ScoringError::AlphaOutOfRange(alpha));
        }
        Ok(Self { alpha, weights })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Circumstance of one event: `alpha * s + sum(beta_i * c_i)`, unnormalized.
pub fn circumstance(
    sentiment: f64,
    emotions: &[EmotionScore],
    params: &CircumstanceParams,
) -> Result<f64, ScoringError> {
    if !(sentiment > 0.0 && sentiment < 1.0) {
        return Err(ScoringError::SentimentOutOfRange(sentiment));
    }
    let mut t = params.alpha * sentiment;
    for e in emotions {
        if !(e.confidence > 0.0 && e.confidence < 1.0) {
            return Err(ScoringError::ConfidenceOutOfRange {
                label: e.label.to_string(),
                confidence: e.confidence,
            });
        }
        let beta = params
            .weights
            .get(e.label)
            .ok_or_else(|| ScoringError::UnknownLabel(e.label.to_string()))?;
        t += beta * e.confidence;
    }
    Ok(t)
}

/// Token → valence in [-1, 1].
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon(HashMap<String, f64>);

impl SentimentLexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SENTIMENT).expect("bundled sentiment lexicon is valid")
    }

    /// Parses `token<TAB>valence` lines; `#` starts a comment line.
    pub fn parse(data: &str) -> Result<Self, ScoringError> {
        let mut map = HashMap::new();
        for (n, line) in data.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (token, value) = line.split_once('\t').ok_or_else(|| ScoringError::Lexicon {
                line: n + 1,
                message: "expected token<TAB>valence".into(),
            })?;
            let valence: f64 = value.trim().parse().map_err(|_| ScoringError::Lexicon {
                line: n + 1,
                message: format!("`{}` is not a number", value.trim()),
            })?;
            if !(-1.0..=1.0).contains(&valence) {
                return Err(ScoringError::ValenceOutOfRange {
                    token: token.to_owned(),
                    valence,
                });
            }
            map.insert(token.trim().to_lowercase(), valence);
        }
        Ok(Self(map))
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.0.get(token).copied()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

/// Token → emotion labels.
#[derive(Debug, Clone, Default)]
pub struct EmotionLexicon(HashMap<String, Vec<EmotionLabel>>);

impl EmotionLexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_EMOTIONS).expect("bundled emotion lexicon is valid")
    }

    /// Parses `token<TAB>label[,label...]` lines.
    pub fn parse(data: &str) -> Result<Self, ScoringError> {
        let mut map = HashMap::new();
        for (n, line) in data.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (token, labels) = line.split_once('\t').ok_or_else(|| ScoringError::Lexicon {
                line: n + 1,
                message: "expected token<TAB>label[,label...]".into(),
            })?;
            let mut parsed = labels
                .split(',')
                .map(EmotionLabel::from_str)
                .collect::<Result<Vec<_>, _>>()?;
            parsed.sort();
            parsed.dedup();
            map.insert(token.trim().to_lowercase(), parsed);
        }
        Ok(Self(map))
    }

    pub fn get(&self, token: &str) -> Option<&[EmotionLabel]> {
        self.0.get(token).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

/// Maps inflected forms to lexicon keys; identity when absent.
pub trait Lemmatizer {
    fn lemma<'a>(&'a self, word: &'a str) -> &'a str;
}

pub struct NoLemmas;

impl Lemmatizer for NoLemmas {
    fn lemma<'a>(&'a self, word: &'a str) -> &'a str {
        word
    }
}

fn lookup<'a, T>(word: &'a str, lemmas: &'a dyn Lemmatizer, get: impl Fn(&str) -> Option<T>) -> Option<T> {
    get(word).or_else(|| {
        let lemma = lemmas.lemma(word);
        if lemma != word {
            get(lemma)
        } else {
            None
        }
    })
}

fn lowercase_words(text: &str) -> impl Iterator<Item = String> {
    tokenize(text).into_iter().filter(|t| t.is_word).map(|t| t.lowercase)
}

/// Sentence sentiment in (0, 1): the mean valence of lexicon hits mapped
/// from [-1, 1] onto [0, 1] and clamped to [0.001, 0.999]. No hits gives 0.5.
pub fn score_sentiment(sentence: &str, lexicon: &SentimentLexicon, lemmas: &dyn Lemmatizer) -> f64 {
    let mut sum = 0.0;
    let mut hits = 0usize;
    for w in lowercase_words(sentence) {
        if let Some(v) = lookup(&w, lemmas, |k| lexicon.get(k)) {
            sum += v;
            hits += 1;
        }
    }
    if hits == 0 {
        return 0.5;
    }
    let mean = sum / hits as f64;
    ((mean + 1.0) / 2.0).clamp(SENTIMENT_EPSILON, 1.0 - SENTIMENT_EPSILON)
}

/// Multi-label emotions for a sentence: each label's confidence is the share
/// of emotion-bearing tokens that carry it, clamped into (0, 1).
pub fn score_emotions(sentence: &str, lexicon: &EmotionLexicon, lemmas: &dyn Lemmatizer) -> Vec<EmotionScore> {
    let mut counts: BTreeMap<EmotionLabel, usize> = BTreeMap::new();
    let mut matched = 0usize;
    for w in lowercase_words(sentence) {
        if let Some(labels) = lookup(&w, lemmas, |k| lexicon.get(k)) {
            matched += 1;
            for &l in labels {
                *counts.entry(l).or_default() += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|(label, n)| EmotionScore {
            label,
            confidence: (n as f64 / matched as f64).clamp(CONFIDENCE_EPSILON, 1.0 - CONFIDENCE_EPSILON),
        })
        .collect()
}

/// Fills sentiment and emotions on each record from its sentence, computing
/// each sentence once. Values carried by an external annotation replace the
/// lexicon scores field by field.
pub fn score_events(
    doc: &Document,
    records: &mut [EventRecord],
    sentiment: &SentimentLexicon,
    emotions: &EmotionLexicon,
    lemmas: &dyn Lemmatizer,
    annotations: &[AnnotationRecord],
) {
    let mut cache: HashMap<usize, (f64, Vec<EmotionScore>)> = HashMap::new();
    for r in records.iter_mut() {
        let idx = r.sentence_index();
        let (s, e) = cache.entry(idx).or_insert_with(|| {
            let text = doc.sentence_text(idx);
            (
                score_sentiment(&text, sentiment, lemmas),
                score_emotions(&text, emotions, lemmas),
            )
        });
        r.sentiment = *s;
        r.emotions = e.clone();
        if let Some(a) = r.trigger.annotation.and_then(|i| annotations.get(i)) {
            if let Some(s) = a.sentiment {
                r.sentiment = s;
            }
            if let Some(e) = &a.emotions {
                r.emotions = e.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(s: &str) -> SentimentLexicon {
        SentimentLexicon::parse(s).unwrap()
    }

    #[test]
    fn neutral_default_without_hits() {
        assert_eq!(score_sentiment("The door was green.", &lex("joy\t1\n"), &NoLemmas), 0.5);
    }

    #[test]
    fn saturated_positive_is_clamped() {
        let s = score_sentiment("Joy, joy!", &lex("joy\t1\n"), &NoLemmas);
        assert_eq!(s, 0.999);
        let s = score_sentiment("Doom.", &lex("doom\t-1\n"), &NoLemmas);
        assert_eq!(s, 0.001);
    }

    #[test]
    fn emotions_single_label_saturates() {
        let lex = EmotionLexicon::parse("grief\tgrief\n").unwrap();
        let e = score_emotions("Her grief was deep.", &lex, &NoLemmas);
        assert_eq!(
            e,
            [EmotionScore {
                label: EmotionLabel::Grief,
                confidence: 0.999
            }]
        );
        assert!(score_emotions("Nothing here.", &lex, &NoLemmas).is_empty());
    }

    #[test]
    fn emotions_are_shares_of_matched_tokens() {
        let lex = EmotionLexicon::parse("wept\tsadness,grief\nsmiled\tjoy\n").unwrap();
        let e = score_emotions("She wept, then smiled, then wept.", &lex, &NoLemmas);
        let get = |l| e.iter().find(|x| x.label == l).unwrap().confidence;
        assert_eq!(get(EmotionLabel::Sadness), 2.0 / 3.0);
        assert_eq!(get(EmotionLabel::Grief), 2.0 / 3.0);
        assert_eq!(get(EmotionLabel::Joy), 1.0 / 3.0);
    }

    #[test]
    fn circumstance_examples() {
        let p = CircumstanceParams::default();
        assert_eq!(circumstance(0.5, &[], &p).unwrap(), 0.25);
        let joy = EmotionScore {
            label: EmotionLabel::Joy,
            confidence: 0.9,
        };
        assert!((circumstance(0.8, &[joy], &p).unwrap() - 2.2).abs() < 1e-12);
        let neg = [
            EmotionScore {
                label: EmotionLabel::Fear,
                confidence: 0.5,
            },
            EmotionScore {
                label: EmotionLabel::Sadness,
                confidence: 0.3,
            },
        ];
        assert!((circumstance(0.2, &neg, &p).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn missing_weight_is_an_error() {
        let mut map = BTreeMap::new();
        map.insert(EmotionLabel::Joy, 2.0);
        let p = CircumstanceParams::new(0.5, EmotionWeights::new(map).unwrap()).unwrap();
        let fear = EmotionScore {
            label: EmotionLabel::Fear,
            confidence: 0.5,
        };
        assert_eq!(
            circumstance(0.5, &[fear], &p),
            Err(ScoringError::UnknownLabel("fear".into()))
        );
    }

    #[test]
    fn parameter_bounds() {
        assert!(CircumstanceParams::new(1.0, EmotionWeights::default()).is_err());
        assert!(CircumstanceParams::new(0.0, EmotionWeights::default()).is_err());
        let mut map = BTreeMap::new();
        map.insert(EmotionLabel::Joy, 2.5);
        assert!(EmotionWeights::new(map).is_err());
        let mut map = BTreeMap::new();
        map.insert(EmotionLabel::Neutral, 1.0);
        assert!(EmotionWeights::new(map).is_err());
    }

    #[test]
    fn default_weights_cover_vocabulary() {
        let w = EmotionWeights::default();
        for l in EmotionLabel::ALL {
            assert!(w.get(l).is_some(), "{l}");
        }
        assert_eq!(w.get(EmotionLabel::Neutral), Some(0.0));
    }

    #[test]
    fn unknown_label_lists_vocabulary() {
        let err = "sorrow".parse::<EmotionLabel>().unwrap_err();
        assert!(err.to_string().contains("admiration, amusement"));
    }

    #[test]
    fn bundled_lexicons_load() {
        assert!(SentimentLexicon::bundled().get("wept").is_some());
        assert!(EmotionLexicon::bundled().get("wept").is_some());
    }

    #[test]
    fn bundled_sentence_golden() {
        // "wept" is the only lexicon hit: valence -0.6, label grief
        let s = score_sentiment("Frodo wept bitterly.", &SentimentLexicon::bundled(), &NoLemmas);
        assert!((s - 0.2).abs() < 1e-15);
        let e = score_emotions("Frodo wept bitterly.", &EmotionLexicon::bundled(), &NoLemmas);
        assert_eq!(
            e,
            [EmotionScore {
                label: EmotionLabel::Grief,
                confidence: 0.999
            }]
        );
    }

    #[test]
    fn events_share_sentence_scores_and_prefer_external_values() {
        use crate::characters::{extract_characters, CharacterConfig};
        use crate::corpus::Segmenter;
        use crate::events::{merge_annotations, read_annotations, tag_events, TaggerConfig, VerbLexicon};
        use crate::participants::assign_roles;

        let text = "Harry kicked Ron. Ron wept.";
        let doc = Segmenter::default().segment("d", text, text);
        let lex = VerbLexicon::bundled();
        let chars = extract_characters(&doc, &CharacterConfig::default());
        let jsonl = r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":6,"end":12},"sentiment":0.9}"#;
        let notes = read_annotations(jsonl.as_bytes(), Some(&doc)).unwrap();
        let triggers = merge_annotations(&doc, &tag_events(&doc, &lex, &TaggerConfig::default()), &notes, &lex);
        let mut records = assign_roles(&doc, &triggers, &chars, &notes);
        score_events(
            &doc,
            &mut records,
            &SentimentLexicon::bundled(),
            &EmotionLexicon::bundled(),
            &lex,
            &notes,
        );
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].sentiment, 0.9);
        assert_eq!(records[0].emotions[0].label, EmotionLabel::Anger);
        assert!((records[1].sentiment - 0.2).abs() < 1e-15);
    }
}
