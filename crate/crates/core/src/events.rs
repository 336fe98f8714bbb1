//! Realis event triggers and the external annotation interchange.
//!
//! The tagger is lexicon driven: a token is a trigger candidate when it is a
//! known verb form, and it survives only if it reads as something that
//! actually happened (no modal, conditional, negation, infinitive or
//! question around it).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::parse_tsv;
use crate::corpus::{Document, TokenSpan};
use crate::scoring::{EmotionLabel, EmotionScore, Lemmatizer};

const BUNDLED_VERBS: &str = include_str!("../data/verbs.tsv");

/// Inflected verb form → lemma.
#[derive(Debug, Clone, Default)]
pub struct VerbLexicon(HashMap<String, String>);

impl VerbLexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_VERBS)
    }

    pub fn parse(data: &str) -> Self {
        Self(parse_tsv(data).map(|(k, v)| (k, v.to_lowercase())).collect())
    }

    pub fn lemma_of(&self, form: &str) -> Option<&str> {
        self.0.get(form).map(String::as_str)
    }

    pub fn contains(&self, form: &str) -> bool {
        self.0.contains_key(form)
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Lemmatizer for VerbLexicon {
    fn lemma<'a>(&'a self, word: &'a str) -> &'a str {
        self.lemma_of(word).unwrap_or(word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriggerSource {
    Heuristic,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventTrigger {
    /// Narrative order, 0-based, strictly increasing with `token_index`.
    pub event_id: usize,
    pub token_index: usize,
    pub surface: String,
    pub lemma: String,
    pub sentence_index: usize,
    pub realis: bool,
    pub source: TriggerSource,
    /// Index of the external record that produced or overrode this trigger.
    pub annotation: Option<usize>,
}

/// Word lists for the realis filter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaggerConfig {
    pub modals: Vec<String>,
    pub hypotheticals: Vec<String>,
    pub negations: Vec<String>,
    /// Lemmas never tagged as events.
    pub stative: Vec<String>,
    pub clause_breaks: Vec<String>,
    /// Tokens scanned back from a verb when looking for modals or `if`.
    pub scan_cap: usize,
}

fn strings(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| (*w).to_owned()).collect()
}

impl Default for TaggerConfig {
    fn default() -> Self {
        Self {
            modals: strings(&[
                "would", "could", "may", "might", "must", "shall", "will", "should", "can",
            ]),
            hypotheticals: strings(&["if", "unless", "whether", "lest"]),
            negations: strings(&["not", "never"]),
            stative: strings(&["be", "seem", "appear", "have"]),
            clause_breaks: strings(&[
                ",", ";", ":", "and", "but", "or", "because", "so", "then", "while", "when", "after", "before", "that",
                "which", "who", "as", "until", "\"", "“", "”",
            ]),
            scan_cap: 6,
        }
    }
}

const AUXILIARY_LEMMAS: [&str; 3] = ["be", "have", "do"];
const COPULAR_LEMMAS: [&str; 4] = ["seem", "appear", "become", "remain"];
const DETERMINERS: [&str; 14] = [
    "the", "a", "an", "this", "these", "those", "his", "their", "my", "your", "its", "our", "every", "each",
];

/// Deterministic realis event tagger.
pub struct EventTagger<'a> {
    lexicon: &'a VerbLexicon,
    modals: HashSet<&'a str>,
    hypotheticals: HashSet<&'a str>,
    negations: HashSet<&'a str>,
    stative: HashSet<&'a str>,
    clause_breaks: HashSet<&'a str>,
    scan_cap: usize,
}

fn set(words: &[String]) -> HashSet<&str> {
    words.iter().map(String::as_str).collect()
}

impl<'a> EventTagger<'a> {
    pub fn new(lexicon: &'a VerbLexicon, config: &'a TaggerConfig) -> Self {
        Self {
            lexicon,
            modals: set(&config.modals),
            hypotheticals: set(&config.hypotheticals),
            negations: set(&config.negations),
            stative: set(&config.stative),
            clause_breaks: set(&config.clause_breaks),
            scan_cap: config.scan_cap,
        }
    }

    fn lemma(&self, t: &TokenSpan) -> Option<&'a str> {
        if t.is_word {
            self.lexicon.lemma_of(&t.lowercase)
        } else {
            None
        }
    }

    fn is_negation(&self, t: &TokenSpan) -> bool {
        self.negations.contains(t.lowercase.as_str()) || t.lowercase.ends_with("n't") || t.lowercase.ends_with("n’t")
    }

    fn is_auxiliary_form(&self, t: &TokenSpan) -> bool {
        self.lemma(t).is_some_and(|l| AUXILIARY_LEMMAS.contains(&l))
    }

    /// A be/have/do form heading a verb group ("was kicked", "did go").
    fn is_auxiliary_use(&self, toks: &[TokenSpan], i: usize) -> bool {
        if !self.is_auxiliary_form(&toks[i]) {
            return false;
        }
        toks[i + 1..]
            .iter()
            .take_while(|t| t.is_word)
            .take(3)
            .find(|t| !(self.is_negation(t) || t.lowercase.ends_with("ly")))
            .is_some_and(|t| self.lemma(t).is_some())
    }

    /// Tags every sentence of the document.
    pub fn tag(&self, doc: &Document) -> Vec<EventTrigger> {
        let mut out = Vec::new();
        for s in &doc.sentences {
            let toks = &doc.tokens[s.first_token..s.end_token];
            for (i, t) in toks.iter().enumerate() {
                if let Some(lemma) = self.lemma(t) {
                    if self.is_realis_trigger(toks, i, lemma) {
                        out.push(EventTrigger {
                            event_id: 0,
                            token_index: s.first_token + i,
                            surface: t.surface.clone(),
                            lemma: lemma.to_owned(),
                            sentence_index: s.index,
                            realis: true,
                            source: TriggerSource::Heuristic,
                            annotation: None,
                        });
                    }
                }
            }
        }
        renumber(&mut out);
        out
    }

    fn is_realis_trigger(&self, toks: &[TokenSpan], i: usize, lemma: &str) -> bool {
        let t = &toks[i];
        // mid-sentence capitals are names ("Will", "Rose")
        if t.is_capitalized && toks[..i].iter().any(|p| p.is_word) {
            return false;
        }
        if self.stative.contains(lemma) || self.is_auxiliary_use(toks, i) {
            return false;
        }
        let prev_word = i.checked_sub(1).map(|j| &toks[j]).filter(|p| p.is_word);
        if let Some(p) = prev_word {
            if DETERMINERS.contains(&p.lowercase.as_str()) || p.lowercase == "to" {
                return false;
            }
            // "seemed tired", "became frightened"
            if self.lemma(p).is_some_and(|l| COPULAR_LEMMAS.contains(&l)) {
                return false;
            }
        }
        // "going to <verb>" is a plan, not an event
        if lemma == "go" && t.lowercase == "going" && toks.get(i + 1).is_some_and(|n| n.lowercase == "to") {
            return false;
        }
        if self.clause_is_irrealis(toks, i) || self.verb_group_negated(toks, i) {
            return false;
        }
        // questions are not assertions
        let terminal = toks[i + 1..]
            .iter()
            .find(|n| matches!(n.surface.as_str(), "." | "!" | "?"));
        terminal.is_none_or(|n| n.surface != "?")
    }

    /// Scans back to the clause boundary for a modal or conditional marker.
    fn clause_is_irrealis(&self, toks: &[TokenSpan], i: usize) -> bool {
        for (j, t) in toks[..i].iter().enumerate().rev().take(self.scan_cap) {
            let w = t.lowercase.as_str();
            if t.is_capitalized && j > 0 {
                continue;
            }
            if self.modals.contains(w) || w.ends_with("'ll") || w.ends_with("’ll") || self.hypotheticals.contains(w) {
                return true;
            }
            if self.clause_breaks.contains(w) {
                return false;
            }
        }
        false
    }

    /// `not`/`never`/`-n't` directly before the verb or its auxiliaries.
    fn verb_group_negated(&self, toks: &[TokenSpan], i: usize) -> bool {
        let mut j = i;
        while j > 0 {
            let p = &toks[j - 1];
            if !p.is_word {
                return false;
            }
            if self.is_negation(p) {
                return true;
            }
            if !self.is_auxiliary_form(p) {
                return false;
            }
            j -= 1;
        }
        false
    }
}

pub fn tag_events(doc: &Document, lexicon: &VerbLexicon, config: &TaggerConfig) -> Vec<EventTrigger> {
    EventTagger::new(lexicon, config).tag(doc)
}

fn renumber(triggers: &mut [EventTrigger]) {
    triggers.sort_by_key(|t| t.token_index);
    for (i, t) in triggers.iter_mut().enumerate() {
        t.event_id = i;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEmotion {
    pub label: String,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    doc_id: String,
    sentence_index: usize,
    trigger: CharSpan,
    #[serde(default)]
    actor: Option<CharSpan>,
    #[serde(default)]
    experiencer: Option<CharSpan>,
    #[serde(default)]
    sentiment: Option<f64>,
    #[serde(default)]
    emotions: Option<Vec<RawEmotion>>,
}

/// One validated line of the annotation interchange file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    /// 1-based line number in the source file.
    pub line: usize,
    pub doc_id: String,
    pub sentence_index: usize,
    pub trigger: CharSpan,
    pub actor: Option<CharSpan>,
    pub experiencer: Option<CharSpan>,
    pub sentiment: Option<f64>,
    pub emotions: Option<Vec<EmotionScore>>,
}

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("cannot read annotations: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("line {line} (doc `{doc_id}`): {what} span {start}..{end} is out of bounds")]
    OutOfBounds {
        line: usize,
        doc_id: String,
        what: &'static str,
        start: usize,
        end: usize,
    },
    #[error("line {line}: unknown emotion label `{label}`; valid labels: {valid}")]
    UnknownLabel { line: usize, label: String, valid: String },
}

fn validate_record(line: usize, raw: RawRecord, doc: Option<&Document>) -> Result<AnnotationRecord, AnnotationError> {
    let invalid = |message: String| AnnotationError::Invalid { line, message };
    let spans = [
        ("trigger", Some(raw.trigger)),
        ("actor", raw.actor),
        ("experiencer", raw.experiencer),
    ];
    for (what, span) in spans {
        if let Some(s) = span {
            if s.start >= s.end {
                return Err(invalid(format!(
                    "{what} span {}..{} is empty or reversed",
                    s.start, s.end
                )));
            }
        }
    }
    if let Some(s) = raw.sentiment {
        if !(s > 0.0 && s < 1.0) {
            return Err(invalid(format!("sentiment {s} is outside (0, 1)")));
        }
    }
    let emotions = match raw.emotions {
        None => None,
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for e in list {
                let label: EmotionLabel = e.label.parse().map_err(|_| AnnotationError::UnknownLabel {
                    line,
                    label: e.label.clone(),
                    valid: EmotionLabel::vocabulary(),
                })?;
                if !(e.confidence > 0.0 && e.confidence < 1.0) {
                    return Err(invalid(format!(
                        "confidence {} for `{}` is outside (0, 1)",
                        e.confidence, e.label
                    )));
                }
                out.push(EmotionScore {
                    label,
                    confidence: e.confidence,
                });
            }
            Some(out)
        }
    };
    if let Some(doc) = doc {
        if raw.doc_id != doc.doc_id {
            return Err(invalid(format!(
                "doc_id `{}` does not match document `{}`",
                raw.doc_id, doc.doc_id
            )));
        }
        let len = doc.char_len();
        for (what, span) in spans {
            if let Some(s) = span {
                if s.end > len {
                    return Err(AnnotationError::OutOfBounds {
                        line,
                        doc_id: raw.doc_id.clone(),
                        what,
                        start: s.start,
                        end: s.end,
                    });
                }
            }
        }
        let sentence = doc.sentences.get(raw.sentence_index).ok_or_else(|| {
            invalid(format!(
                "sentence_index {} is out of bounds ({} sentences)",
                raw.sentence_index,
                doc.sentences.len()
            ))
        })?;
        if raw.trigger.start < sentence.start || raw.trigger.end > sentence.end {
            return Err(AnnotationError::OutOfBounds {
                line,
                doc_id: raw.doc_id.clone(),
                what: "trigger (outside its sentence)",
                start: raw.trigger.start,
                end: raw.trigger.end,
            });
        }
        if doc.tokens_in(raw.trigger.start, raw.trigger.end).is_empty() {
            return Err(invalid("trigger span covers no token".into()));
        }
    }
    Ok(AnnotationRecord {
        line,
        doc_id: raw.doc_id,
        sentence_index: raw.sentence_index,
        trigger: raw.trigger,
        actor: raw.actor,
        experiencer: raw.experiencer,
        sentiment: raw.sentiment,
        emotions,
    })
}

fn parse_line(line_no: usize, line: &str, doc: Option<&Document>) -> Result<AnnotationRecord, AnnotationError> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| AnnotationError::Malformed {
        line: line_no,
        message: e.to_string(),
    })?;
    validate_record(line_no, raw, doc)
}

/// Reads line-delimited JSON annotations, stopping at the first bad line.
/// Blank lines are skipped. With a document, spans are bounds-checked.
pub fn read_annotations<R: Read>(reader: R, doc: Option<&Document>) -> Result<Vec<AnnotationRecord>, AnnotationError> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(n + 1, &line, doc)?);
    }
    Ok(out)
}

pub fn ingest_annotations(path: &Path, doc: Option<&Document>) -> Result<Vec<AnnotationRecord>, AnnotationError> {
    read_annotations(fs::File::open(path)?, doc)
}

/// Every problem in an annotation file, one per offending line.
pub fn lint_annotations(text: &str, doc: Option<&Document>) -> Vec<AnnotationError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .filter_map(|(n, l)| parse_line(n + 1, l, doc).err())
        .collect()
}

/// The token an annotation span refers to: its first word token.
pub fn span_head_token(doc: &Document, span: CharSpan) -> Option<usize> {
    let range = doc.tokens_in(span.start, span.end);
    range
        .clone()
        .find(|&i| doc.tokens[i].is_word)
        .or(range.into_iter().next())
}

/// Merges external triggers into the heuristic ones. Identity is the head
/// token of the trigger span; on a collision the external record wins, and
/// among external records the later line wins. Event ids are renumbered.
pub fn merge_annotations(
    doc: &Document,
    triggers: &[EventTrigger],
    records: &[AnnotationRecord],
    lexicon: &VerbLexicon,
) -> Vec<EventTrigger> {
    let mut by_token: BTreeMap<usize, EventTrigger> = triggers.iter().map(|t| (t.token_index, t.clone())).collect();
    for (ri, r) in records.iter().enumerate() {
        let Some(tok) = span_head_token(doc, r.trigger) else {
            continue;
        };
        let token = &doc.tokens[tok];
        by_token.insert(
            tok,
            EventTrigger {
                event_id: 0,
                token_index: tok,
                surface: token.surface.clone(),
                lemma: lexicon.lemma(&token.lowercase).to_owned(),
                sentence_index: token.sentence_index,
                realis: true,
                source: TriggerSource::External,
                annotation: Some(ri),
            },
        );
    }
    let mut out: Vec<EventTrigger> = by_token.into_values().collect();
    renumber(&mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventDensity {
    pub events_per_word: f64,
    /// Set when the document has no words and the density is undefined.
    pub undefined: bool,
}

pub fn event_density(word_count: usize, event_count: usize) -> EventDensity {
    if word_count == 0 {
        return EventDensity {
            events_per_word: 0.0,
            undefined: true,
        };
    }
    EventDensity {
        events_per_word: event_count as f64 / word_count as f64,
        undefined: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Segmenter;

    fn doc(text: &str) -> Document {
        Segmenter::default().segment("d", text, text)
    }

    fn tagged(text: &str) -> Vec<String> {
        let lex = VerbLexicon::bundled();
        tag_events(&doc(text), &lex, &TaggerConfig::default())
            .into_iter()
            .map(|t| t.surface)
            .collect()
    }

    #[test]
    fn tags_simple_past() {
        assert_eq!(tagged("Harry kicked Ron."), ["kicked"]);
    }

    #[test]
    fn realis_filters() {
        assert!(tagged("Harry would kick Ron.").is_empty());
        assert!(tagged("If Harry kicked Ron, nobody saw.").len() == 1);
        assert!(tagged("Harry did not kick Ron.").is_empty());
        assert!(tagged("Harry never kicked Ron.").is_empty());
        assert!(tagged("Harry didn't kick Ron.").is_empty());
        assert_eq!(tagged("Harry wanted to kick Ron."), ["wanted"]);
        assert!(tagged("Did Harry kick Ron?").is_empty());
        assert!(tagged("Harry was going to kick Ron.").is_empty());
    }

    #[test]
    fn auxiliaries_and_statives_are_skipped() {
        assert_eq!(tagged("Ron was kicked by Harry."), ["kicked"]);
        assert_eq!(tagged("Harry had kicked Ron."), ["kicked"]);
        assert!(tagged("Harry seemed tired.").is_empty());
    }

    #[test]
    fn nouns_after_determiners_are_skipped() {
        assert!(tagged("The ring glowed.").contains(&"glowed".to_owned()));
        assert!(!tagged("He lost the ring.").contains(&"ring".to_owned()));
    }

    #[test]
    fn capitalized_mid_sentence_is_a_name() {
        assert_eq!(tagged("Then Will smiled."), ["smiled"]);
    }

    #[test]
    fn modal_scope_stops_at_clause_break() {
        assert_eq!(tagged("He would stay, but she left."), ["left"]);
    }

    #[test]
    fn parses_well_formed_record() {
        let line = r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":6,"end":12},"sentiment":0.72}"#;
        let recs = read_annotations(line.as_bytes(), None).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].sentiment, Some(0.72));
        assert_eq!(recs[0].line, 1);
    }

    #[test]
    fn rejects_confidence_out_of_range() {
        let line = r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":0,"end":1},"emotions":[{"label":"joy","confidence":1.5}]}"#;
        let err = read_annotations(line.as_bytes(), None).unwrap_err();
        assert!(matches!(err, AnnotationError::Invalid { line: 1, .. }), "{err}");
    }

    #[test]
    fn empty_file_is_empty() {
        assert!(read_annotations("".as_bytes(), None).unwrap().is_empty());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "{\"doc_id\":\"d\",\"sentence_index\":0,\"trigger\":{\"start\":0,\"end\":1}}\n\nnot json\n";
        let err = read_annotations(text.as_bytes(), None).unwrap_err();
        assert!(matches!(err, AnnotationError::Malformed { line: 3, .. }));
    }

    #[test]
    fn unknown_label_lists_vocabulary() {
        let line = r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":0,"end":1},"emotions":[{"label":"sorrow","confidence":0.5}]}"#;
        let err = read_annotations(line.as_bytes(), None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sorrow") && msg.contains("neutral"), "{msg}");
    }

    #[test]
    fn out_of_bounds_span_names_record() {
        let d = doc("Harry kicked Ron.");
        let line = r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":6,"end":99}}"#;
        let err = read_annotations(line.as_bytes(), Some(&d)).unwrap_err();
        assert!(matches!(err, AnnotationError::OutOfBounds { line: 1, .. }));
        assert!(err.to_string().contains("doc `d`"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let line = r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":0,"end":1},"extra":1}"#;
        assert!(read_annotations(line.as_bytes(), None).is_err());
    }

    #[test]
    fn merge_prefers_external_and_is_idempotent() {
        let d = doc("Harry kicked Ron and the door creaked.");
        let lex = VerbLexicon::bundled();
        let heuristic = tag_events(&d, &lex, &TaggerConfig::default());
        let text = concat!(
            r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":6,"end":12},"sentiment":0.3}"#,
            "\n",
            r#"{"doc_id":"d","sentence_index":0,"trigger":{"start":25,"end":29}}"#
        );
        let recs = read_annotations(text.as_bytes(), Some(&d)).unwrap();
        let once = merge_annotations(&d, &heuristic, &recs, &lex);
        assert_eq!(once[0].source, TriggerSource::External);
        assert_eq!(once[0].surface, "kicked");
        assert!(once.iter().any(|t| t.surface == "door"));
        let twice = merge_annotations(&d, &once, &recs, &lex);
        assert_eq!(once, twice);
        let ids: Vec<_> = once.iter().map(|t| t.event_id).collect();
        assert_eq!(ids, (0..once.len()).collect::<Vec<_>>());
    }

    #[test]
    fn density() {
        assert_eq!(
            event_density(0, 0),
            EventDensity {
                events_per_word: 0.0,
                undefined: true
            }
        );
        assert_eq!(event_density(1000, 86).events_per_word, 0.086);
    }
}
