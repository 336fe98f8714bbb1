//! Text ingestion: cleaning, tokenization and sentence segmentation.
//!
//! All offsets handed out by this module are Unicode scalar-value indices
//! into the *cleaned* text. Every later stage (mentions, triggers,
//! annotation spans) uses the same coordinate system.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BUNDLED_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("input is {len} bytes, larger than the configured limit of {max} bytes")]
    Oversized { len: usize, max: usize },
}

/// Switches for [`clean`]. All rules are on by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleaningConfig {
    pub max_bytes: usize,
    pub remove_page_numbers: bool,
    pub remove_urls: bool,
    pub strip_unreadable: bool,
    pub collapse_blank_lines: bool,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        Self {
            max_bytes: 256 * 1024 * 1024,
            remove_page_numbers: true,
            remove_urls: true,
            strip_unreadable: true,
            collapse_blank_lines: true,
        }
    }
}

/// Cleans raw narrative text.
///
/// Applied in this order: unreadable characters are stripped (tabs become
/// spaces), URLs are cut out, standalone page-number lines are dropped and
/// runs of line breaks (including whitespace-only lines) collapse to a single
/// newline. The output is a fixed point: `clean(clean(x)) == clean(x)`.
pub fn clean(raw_text: &str, rules: &CleaningConfig) -> Result<String, CorpusError> {
    if raw_text.len() > rules.max_bytes {
        return Err(CorpusError::Oversized {
            len: raw_text.len(),
            max: rules.max_bytes,
        });
    }

    let text: String = if rules.strip_unreadable {
        raw_text
            .chars()
            .filter_map(|c| match c {
                '\n' => Some('\n'),
                '\t' => Some(' '),
                c if is_unreadable(c) => None,
                c => Some(c),
            })
            .collect()
    } else {
        raw_text.to_owned()
    };

    let mut kept: Vec<String> = Vec::new();
    for line in text.split('\n') {
        let line = if rules.remove_urls {
            remove_urls(line)
        } else {
            line.to_owned()
        };
        if rules.remove_page_numbers && is_page_number_line(&line) {
            continue;
        }
        if rules.collapse_blank_lines && line.trim().is_empty() {
            continue;
        }
        kept.push(line);
    }
    Ok(kept.join("\n"))
}

fn is_unreadable(c: char) -> bool {
    c.is_control()
        || matches!(
            c,
            '\u{FFFD}' | '\u{FEFF}' | '\u{200B}' | '\u{200C}' | '\u{200D}' | '\u{2060}' | '\u{00AD}'
        )
}

fn is_page_number_line(line: &str) -> bool {
    let core = line.trim_matches(|c: char| c.is_whitespace() || matches!(c, '-' | '–' | '—' | '.'));
    !core.is_empty() && core.chars().all(|c| c.is_ascii_digit())
}

fn is_scheme_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '+' | '.' | '-')
}

/// Cuts `scheme://non-space` runs and whitespace-delimited tokens that start
/// with `www.` out of a single line.
fn remove_urls(line: &str) -> String {
    let chars: Vec<char> = line.chars().collect();
    let mut out = String::with_capacity(line.len());
    let mut i = 0;
    while i < chars.len() {
        // www. token at a token start
        if (i == 0 || chars[i - 1].is_whitespace()) && starts_with_www(&chars[i..]) {
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            continue;
        }
        if is_scheme_char(chars[i]) && (i == 0 || !is_scheme_char(chars[i - 1])) {
            let mut j = i;
            while j < chars.len() && is_scheme_char(chars[j]) {
                j += 1;
            }
            // a scheme starts with a letter
            let scheme_start = (i..j).find(|&l| chars[l].is_ascii_alphabetic());
            if let (true, Some(l)) = (chars[j..].starts_with(&[':', '/', '/']), scheme_start) {
                out.extend(&chars[i..l]);
                let mut k = j + 3;
                while k < chars.len() && !chars[k].is_whitespace() {
                    k += 1;
                }
                i = k;
                continue;
            }
            out.extend(&chars[i..j]);
            i = j;
            continue;
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

fn starts_with_www(chars: &[char]) -> bool {
    chars.len() >= 4 && chars[..3].iter().all(|c| c.eq_ignore_ascii_case(&'w')) && chars[3] == '.'
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub lowercase: String,
    pub is_capitalized: bool,
    /// True for alphanumeric tokens; false for single punctuation marks.
    pub is_word: bool,
    pub sentence_index: usize,
}

impl TokenSpan {
    pub fn is_punct(&self, c: char) -> bool {
        !self.is_word && self.surface.starts_with(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceSpan {
    pub start: usize,
    pub end: usize,
    pub index: usize,
    /// Half-open range of token indices belonging to this sentence.
    pub first_token: usize,
    pub end_token: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub raw_text: String,
    pub clean_text: String,
    pub sentences: Vec<SentenceSpan>,
    pub tokens: Vec<TokenSpan>,
}

impl Document {
    /// Length of the cleaned text in characters.
    pub fn char_len(&self) -> usize {
        self.clean_text.chars().count()
    }

    /// Text between two character offsets of the cleaned text.
    pub fn slice(&self, start: usize, end: usize) -> String {
        self.clean_text
            .chars()
            .skip(start)
            .take(end.saturating_sub(start))
            .collect()
    }

    pub fn sentence_tokens(&self, sentence: usize) -> &[TokenSpan] {
        let s = &self.sentences[sentence];
        &self.tokens[s.first_token..s.end_token]
    }

    /// Surface text of a sentence.
    pub fn sentence_text(&self, sentence: usize) -> String {
        let s = &self.sentences[sentence];
        let mut out = String::new();
        let mut prev_end = None;
        for t in &self.tokens[s.first_token..s.end_token] {
            if let Some(p) = prev_end {
                if t.start > p {
                    out.push(' ');
                }
            }
            out.push_str(&t.surface);
            prev_end = Some(t.end);
        }
        out
    }

    /// Index of the token containing the character offset, if any.
    pub fn token_at(&self, offset: usize) -> Option<usize> {
        let idx = self.tokens.partition_point(|t| t.end <= offset);
        (idx < self.tokens.len() && self.tokens[idx].start <= offset).then_some(idx)
    }

    /// Token indices overlapping the half-open character range.
    pub fn tokens_in(&self, start: usize, end: usize) -> std::ops::Range<usize> {
        let lo = self.tokens.partition_point(|t| t.end <= start);
        let hi = self.tokens.partition_point(|t| t.start < end);
        lo..hi.max(lo)
    }
}

/// Sentence splitter and tokenizer.
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Self {
            abbreviations: parse_word_list(BUNDLED_ABBREVIATIONS),
        }
    }
}

pub(crate) fn parse_word_list(data: &str) -> HashSet<String> {
    data.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.trim_end_matches('.').to_lowercase())
        .collect()
}

impl Segmenter {
    pub fn with_abbreviations<I, S>(mut self, extra: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.abbreviations.extend(
            extra
                .into_iter()
                .map(|s| s.as_ref().trim().trim_end_matches('.').to_lowercase()),
        );
        self
    }

    pub fn is_abbreviation(&self, word: &str) -> bool {
        self.abbreviations.contains(&word.to_lowercase())
    }

    /// Splits already-cleaned text into tokens and sentences.
    pub fn segment(&self, doc_id: &str, raw_text: &str, clean_text: &str) -> Document {
        let mut tokens = tokenize(clean_text);
        let sentences = self.split_sentences(&mut tokens);
        Document {
            doc_id: doc_id.to_owned(),
            raw_text: raw_text.to_owned(),
            clean_text: clean_text.to_owned(),
            sentences,
            tokens,
        }
    }

    fn split_sentences(&self, tokens: &mut [TokenSpan]) -> Vec<SentenceSpan> {
        let mut sentences = Vec::new();
        let mut first = 0;
        let mut i = 0;
        while i < tokens.len() {
            if let Some(last) = self.boundary_after(tokens, i) {
                push_sentence(&mut sentences, tokens, first, last + 1);
                first = last + 1;
                i = last + 1;
            } else {
                i += 1;
            }
        }
        if first < tokens.len() {
            push_sentence(&mut sentences, tokens, first, tokens.len());
        }
        sentences
    }

    /// If a sentence ends at token `i`, returns the index of the last token
    /// of that sentence (terminal punctuation plus any closing quotes).
    fn boundary_after(&self, tokens: &[TokenSpan], i: usize) -> Option<usize> {
        let t = &tokens[i];
        if t.is_word || !matches!(t.surface.as_str(), "." | "!" | "?" | "…") {
            return None;
        }
        if t.surface == "." && i > 0 {
            let prev = &tokens[i - 1];
            if prev.is_word && prev.end == t.start && self.is_abbreviated(prev) {
                return None;
            }
        }
        let mut last = i;
        while last + 1 < tokens.len()
            && tokens[last + 1].start == tokens[last].end
            && is_closer(&tokens[last + 1].surface)
        {
            last += 1;
        }
        let next = tokens.get(last + 1)?;
        if next.start == tokens[last].end {
            return None;
        }
        let starts_upper = |tok: &TokenSpan| tok.is_word && tok.is_capitalized;
        let opens_upper = is_opener(&next.surface)
            && tokens
                .get(last + 2)
                .is_some_and(|n| n.start == next.end && starts_upper(n));
        (starts_upper(next) || opens_upper).then_some(last)
    }

    fn is_abbreviated(&self, word: &TokenSpan) -> bool {
        let mut chars = word.surface.chars();
        let single_initial = matches!((chars.next(), chars.next()), (Some(c), None) if c.is_uppercase());
        single_initial || self.abbreviations.contains(&word.lowercase)
    }
}

fn push_sentence(out: &mut Vec<SentenceSpan>, tokens: &mut [TokenSpan], first: usize, end: usize) {
    let index = out.len();
    for t in &mut tokens[first..end] {
        t.sentence_index = index;
    }
    out.push(SentenceSpan {
        start: tokens[first].start,
        end: tokens[end - 1].end,
        index,
        first_token: first,
        end_token: end,
    });
}

fn is_closer(s: &str) -> bool {
    matches!(s, "\"" | "'" | "”" | "’" | ")" | "]")
}

fn is_opener(s: &str) -> bool {
    matches!(s, "\"" | "'" | "“" | "‘" | "(" | "[")
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

/// Splits text into word tokens (alphanumeric runs, with internal
/// apostrophes and hyphens) and single-character punctuation tokens.
/// Sentence indices are left at zero.
pub fn tokenize(text: &str) -> Vec<TokenSpan> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_alphanumeric() {
            i += 1;
            while i < chars.len() {
                if chars[i].is_alphanumeric() {
                    i += 1;
                } else if is_joiner(chars[i]) && i + 1 < chars.len() && chars[i + 1].is_alphanumeric() {
                    i += 2;
                } else {
                    break;
                }
            }
        } else {
            i += 1;
        }
        let surface: String = chars[start..i].iter().collect();
        tokens.push(TokenSpan {
            start,
            end: i,
            lowercase: surface.to_lowercase(),
            is_capitalized: c.is_uppercase(),
            is_word: c.is_alphanumeric(),
            surface,
            sentence_index: 0,
        });
    }
    tokens
}

/// Cleans then segments in one step.
pub fn load_document(
    doc_id: &str,
    raw_text: &str,
    rules: &CleaningConfig,
    segmenter: &Segmenter,
) -> Result<Document, CorpusError> {
    let clean_text = clean(raw_text, rules)?;
    Ok(segmenter.segment(doc_id, raw_text, &clean_text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub word_count: usize,
    pub sentence_count: usize,
}

/// A word is a token containing at least one letter and no digits.
pub fn is_alphabetic_word(token: &TokenSpan) -> bool {
    token.is_word && token.surface.chars().any(char::is_alphabetic) && !token.surface.chars().any(|c| c.is_numeric())
}

pub fn corpus_stats(doc: &Document) -> CorpusStats {
    CorpusStats {
        word_count: doc.tokens.iter().filter(|t| is_alphabetic_word(t)).count(),
        sentence_count: doc.sentences.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(text: &str) -> Document {
        Segmenter::default().segment("t", text, text)
    }

    #[test]
    fn removes_page_number_lines() {
        let out = clean("He ran.\n\n  37  \nShe hid.", &CleaningConfig::default()).unwrap();
        assert_eq!(out, "He ran.\nShe hid.");
        let out = clean("a\n- 12 -\n..4..\nb", &CleaningConfig::default()).unwrap();
        assert_eq!(out, "a\nb");
        // two numbers are not a page number
        let out = clean("12 13", &CleaningConfig::default()).unwrap();
        assert_eq!(out, "12 13");
    }

    #[test]
    fn removes_urls() {
        let rules = CleaningConfig::default();
        assert_eq!(clean("See http://x.y/z now", &rules).unwrap(), "See  now");
        assert_eq!(clean("go www.example.com today", &rules).unwrap(), "go  today");
        assert_eq!(clean("(https://a.b) ok", &rules).unwrap(), "( ok");
        assert_eq!(clean("ratio 3:1 // fine", &rules).unwrap(), "ratio 3:1 // fine");
    }

    #[test]
    fn identity_on_plain_text() {
        let s = "plain text, nothing to clean";
        assert_eq!(clean(s, &CleaningConfig::default()).unwrap(), s);
    }

    #[test]
    fn strips_control_characters() {
        let out = clean("a\u{0}b\r\nc\td\u{FEFF}", &CleaningConfig::default()).unwrap();
        assert_eq!(out, "ab\nc d");
    }

    #[test]
    fn rejects_oversized_input() {
        let rules = CleaningConfig {
            max_bytes: 4,
            ..CleaningConfig::default()
        };
        assert_eq!(clean("hello", &rules), Err(CorpusError::Oversized { len: 5, max: 4 }));
    }

    #[test]
    fn segments_paper_sentence() {
        let doc = seg("Harry kicked Ron.");
        assert_eq!(doc.sentences.len(), 1);
        let surfaces: Vec<_> = doc.tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, ["Harry", "kicked", "Ron", "."]);
        assert_eq!(corpus_stats(&doc).word_count, 3);
    }

    #[test]
    fn empty_text_yields_empty_document() {
        let doc = seg("");
        assert!(doc.sentences.is_empty());
        assert!(doc.tokens.is_empty());
        assert_eq!(corpus_stats(&doc).word_count, 0);
    }

    #[test]
    fn abbreviation_does_not_split() {
        let doc = seg("Mr. Sawyer left. He wept.");
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentence_text(0), "Mr. Sawyer left.");
        assert_eq!(doc.sentence_text(1), "He wept.");
    }

    #[test]
    fn quotes_and_lowercase_continuations() {
        let doc = seg("\"Run!\" he cried. \"Now.\" The end? yes. Done");
        let texts: Vec<_> = (0..doc.sentences.len()).map(|i| doc.sentence_text(i)).collect();
        assert_eq!(texts, ["\"Run!\" he cried.", "\"Now.\"", "The end? yes.", "Done"]);
    }

    #[test]
    fn initials_do_not_split() {
        let doc = seg("J. R. Tolkien wrote. Then he slept.");
        assert_eq!(doc.sentences.len(), 2);
    }

    #[test]
    fn word_tokens_keep_internal_apostrophes() {
        let doc = seg("Frodo's friend didn't go-to bed.");
        let surfaces: Vec<_> = doc.tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, ["Frodo's", "friend", "didn't", "go-to", "bed", "."]);
    }

    #[test]
    fn offsets_are_scalar_indices() {
        let doc = seg("Éowyn smiled. Él rió.");
        assert_eq!(doc.tokens[0].end, 5);
        assert_eq!(doc.tokens[1].start, 6);
        assert_eq!(doc.slice(6, 12), "smiled");
        assert_eq!(doc.token_at(7), Some(1));
        assert_eq!(doc.token_at(5), None);
        assert_eq!(doc.tokens_in(0, 13), 0..3);
    }
}
