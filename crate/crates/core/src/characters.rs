//! Character mentions, alias clustering and pronoun resolution.
//!
//! A deterministic, rule-based stand-in for a neural coreference system:
//! capitalized-run name detection, token-subset alias clustering and a
//! recency + gender heuristic for pronouns.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{parse_word_list, Document, TokenSpan};

const BUNDLED_HONORIFICS: &str = include_str!("../data/honorifics.txt");
const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");
const BUNDLED_NAMES: &str = include_str!("../data/names.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Male,
    Female,
    Unknown,
}

impl Gender {
    fn parse(tag: &str) -> Self {
        match tag.trim() {
            "m" | "male" => Gender::Male,
            "f" | "female" => Gender::Female,
            _ => Gender::Unknown,
        }
    }

    pub fn compatible(self, other: Gender) -> bool {
        self == Gender::Unknown || other == Gender::Unknown || self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MentionKind {
    ProperName,
    Pronoun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    /// Half-open range of document token indices.
    pub token_range: (usize, usize),
    pub sentence_index: usize,
    pub kind: MentionKind,
    /// Normalized surface, e.g. `Mr. Sawyer` or `he`.
    pub text: String,
    pub gender: Gender,
    /// Possessive determiners (`his`) never fill an event role.
    pub possessive: bool,
    /// Object-case pronoun (`him`), which cannot refer back to a mention in
    /// its own clause.
    #[serde(default)]
    pub object: bool,
    /// Document-wide clause counter; new clauses start at sentence starts,
    /// at `, ; :` and at coordinating or subordinating words.
    #[serde(default)]
    pub clause: usize,
    pub cluster_id: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterCluster {
    pub cluster_id: usize,
    pub canonical_name: String,
    pub aliases: BTreeSet<String>,
    pub gender: Gender,
    pub mention_count: usize,
    /// Indices into the mention list, in text order.
    pub mention_indices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PronounEntry {
    pub gender: Gender,
    pub possessive: bool,
    #[serde(default)]
    pub object: bool,
    /// Also a possessive determiner when a content word follows (`her`).
    #[serde(default)]
    pub determiner: bool,
}

/// Word lists and knobs for mention detection and coreference.
#[derive(Debug, Clone)]
pub struct CharacterConfig {
    pub honorifics: HashMap<String, Gender>,
    pub pronouns: HashMap<String, PronounEntry>,
    pub stopwords: HashSet<String>,
    /// Known common words; a capitalized sentence-initial token found here
    /// is not a name unless it also appears capitalized mid-sentence.
    pub common_words: HashSet<String>,
    pub name_genders: HashMap<String, Gender>,
    /// How many sentences back a pronoun may look for its antecedent.
    pub pronoun_window: usize,
}

impl Default for CharacterConfig {
    fn default() -> Self {
        let honorifics = parse_tsv(BUNDLED_HONORIFICS)
            .map(|(k, v)| (k, Gender::parse(&v)))
            .collect();
        let name_genders = parse_tsv(BUNDLED_NAMES).map(|(k, v)| (k, Gender::parse(&v))).collect();
        Self {
            honorifics,
            pronouns: default_pronouns(),
            stopwords: parse_word_list(BUNDLED_STOPWORDS),
            common_words: HashSet::new(),
            name_genders,
            pronoun_window: 2,
        }
    }
}

fn default_pronouns() -> HashMap<String, PronounEntry> {
    [
        ("he", Gender::Male, false, false, false),
        ("him", Gender::Male, false, true, false),
        ("his", Gender::Male, true, false, false),
        ("she", Gender::Female, false, false, false),
        ("her", Gender::Female, false, true, true),
        ("hers", Gender::Female, true, false, false),
    ]
    .into_iter()
    .map(|(w, gender, possessive, object, determiner)| {
        (
            w.to_owned(),
            PronounEntry {
                gender,
                possessive,
                object,
                determiner,
            },
        )
    })
    .collect()
}

const CLAUSE_WORDS: [&str; 12] = [
    "and", "but", "or", "because", "so", "while", "when", "after", "before", "that", "which", "who",
];

/// Headings and shouting: two or more letters, none lowercase.
fn is_all_caps(word: &str) -> bool {
    word.chars().filter(|c| c.is_alphabetic()).count() > 1 && !word.chars().any(char::is_lowercase)
}

pub(crate) fn parse_tsv(data: &str) -> impl Iterator<Item = (String, String)> + '_ {
    data.lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| {
            let (k, v) = l.split_once('\t')?;
            Some((k.trim().to_lowercase(), v.trim().to_owned()))
        })
}

impl CharacterConfig {
    /// Adds pronouns such as `they`/`it` with an unknown gender.
    pub fn with_extra_pronouns<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, words: I) -> Self {
        for w in words {
            let w = w.as_ref().to_lowercase();
            let entry = PronounEntry {
                gender: Gender::Unknown,
                possessive: matches!(w.as_str(), "their" | "theirs" | "its"),
                object: w == "them",
                determiner: false,
            };
            self.pronouns.entry(w).or_insert(entry);
        }
        self
    }

    pub fn with_common_words<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, words: I) -> Self {
        self.common_words
            .extend(words.into_iter().map(|w| w.as_ref().to_lowercase()));
        self
    }

    fn honorific_gender(&self, word: &str) -> Option<Gender> {
        self.honorifics.get(word).copied()
    }
}

/// Strips a trailing possessive `'s`.
fn name_stem(token: &TokenSpan) -> &str {
    let s = token.surface.as_str();
    s.strip_suffix("'s").or_else(|| s.strip_suffix("’s")).unwrap_or(s)
}

fn has_possessive(token: &TokenSpan) -> bool {
    name_stem(token).len() != token.surface.len()
}

/// Positions after which a capitalized word tells us nothing about being a
/// name: sentence start, after an opening quote, after a colon.
fn is_initial_position(tokens: &[TokenSpan], i: usize, sentence_first: usize) -> bool {
    let mut j = i;
    while j > sentence_first {
        let prev = &tokens[j - 1];
        if prev.is_word {
            return false;
        }
        if matches!(prev.surface.as_str(), "\"" | "“" | "‘" | "'" | "(" | ":" | "—" | "-") {
            return true;
        }
        j -= 1;
    }
    true
}

struct DocumentEvidence {
    capitalized_mid_sentence: HashSet<String>,
    seen_lowercase: HashSet<String>,
}

fn collect_evidence(doc: &Document) -> DocumentEvidence {
    let mut capitalized_mid_sentence = HashSet::new();
    let mut seen_lowercase = HashSet::new();
    for s in &doc.sentences {
        for i in s.first_token..s.end_token {
            let t = &doc.tokens[i];
            if !t.is_word {
                continue;
            }
            let stem = name_stem(t).to_lowercase();
            if !t.is_capitalized {
                seen_lowercase.insert(stem);
            } else if !is_initial_position(&doc.tokens, i, s.first_token) {
                capitalized_mid_sentence.insert(stem);
            }
        }
    }
    DocumentEvidence {
        capitalized_mid_sentence,
        seen_lowercase,
    }
}

/// Finds proper-name and pronoun mentions.
///
/// Proper names are maximal runs of capitalized tokens (honorifics and
/// their abbreviation dots included). A capitalized word in initial position
/// only starts a name if the same word occurs capitalized mid-sentence
/// elsewhere, or is never seen lowercase and is not a known common word.
/// Runs directly after `the`/`a`/`an` are places or objects, not people.
pub fn detect_mentions(doc: &Document, config: &CharacterConfig) -> Vec<Mention> {
    let evidence = collect_evidence(doc);
    let tokens = &doc.tokens;
    let mut mentions = Vec::new();
    let mut clause = 0;

    for s in &doc.sentences {
        let mut i = s.first_token;
        clause += 1;
        while i < s.end_token {
            let t = &tokens[i];
            if !t.is_word {
                if matches!(t.surface.as_str(), "," | ";" | ":") {
                    clause += 1;
                }
                i += 1;
                continue;
            }
            if CLAUSE_WORDS.contains(&t.lowercase.as_str()) {
                clause += 1;
            }
            if let Some(p) = config.pronouns.get(&t.lowercase) {
                let before_noun = p.determiner
                    && tokens.get(i + 1).is_some_and(|n| {
                        i + 1 < s.end_token
                            && n.is_word
                            && !n.is_capitalized
                            && !config.stopwords.contains(&n.lowercase)
                            && !config.pronouns.contains_key(&n.lowercase)
                    });
                let possessive = p.possessive || before_noun;
                mentions.push(Mention {
                    token_range: (i, i + 1),
                    sentence_index: s.index,
                    kind: MentionKind::Pronoun,
                    text: t.lowercase.clone(),
                    gender: p.gender,
                    possessive,
                    object: p.object && !possessive,
                    clause,
                    cluster_id: None,
                });
                i += 1;
                continue;
            }
            let is_honorific =
                |tok: &TokenSpan| tok.is_word && tok.is_capitalized && config.honorifics.contains_key(&tok.lowercase);
            let is_name_word = |tok: &TokenSpan| {
                tok.is_word
                    && tok.is_capitalized
                    && tok.surface.chars().next().is_some_and(char::is_alphabetic)
                    && !config.stopwords.contains(&name_stem(tok).to_lowercase())
                    && !config.pronouns.contains_key(&tok.lowercase)
                    && !is_all_caps(&tok.surface)
            };
            if !is_honorific(t) && !is_name_word(t) {
                i += 1;
                continue;
            }
            if !is_honorific(t) && is_initial_position(tokens, i, s.first_token) {
                let stem = name_stem(t).to_lowercase();
                let qualifies = evidence.capitalized_mid_sentence.contains(&stem)
                    || (!evidence.seen_lowercase.contains(&stem) && !config.common_words.contains(&stem));
                if !qualifies {
                    i += 1;
                    continue;
                }
            }

            // extend the run
            let start = i;
            let mut end = i;
            let mut words = 0;
            loop {
                let tok = &tokens[end];
                if is_honorific(tok) {
                    end += 1;
                    if end < s.end_token && tokens[end].is_punct('.') && tokens[end].start == tok.end {
                        end += 1;
                    }
                } else if is_name_word(tok) {
                    end += 1;
                    words += 1;
                    if has_possessive(tok) {
                        break;
                    }
                } else {
                    break;
                }
                if end >= s.end_token {
                    break;
                }
            }
            // honorifics without a name ("the Professor") are not mentions
            let after_determiner =
                start > s.first_token && matches!(tokens[start - 1].lowercase.as_str(), "the" | "a" | "an");
            if words > 0 && !after_determiner {
                let (text, gender) = normalize_name(&tokens[start..end], config);
                mentions.push(Mention {
                    token_range: (start, end),
                    sentence_index: s.index,
                    kind: MentionKind::ProperName,
                    text,
                    gender,
                    possessive: false,
                    object: false,
                    clause,
                    cluster_id: None,
                });
            }
            i = end.max(i + 1);
        }
    }
    mentions
}

fn normalize_name(run: &[TokenSpan], config: &CharacterConfig) -> (String, Gender) {
    let mut text = String::new();
    let mut gender = Gender::Unknown;
    for tok in run {
        if !tok.is_word {
            text.push_str(&tok.surface);
            continue;
        }
        if let Some(g) = config.honorific_gender(&tok.lowercase) {
            if gender == Gender::Unknown {
                gender = g;
            }
        }
        if !text.is_empty() {
            text.push(' ');
        }
        text.push_str(name_stem(tok));
    }
    (text, gender)
}

/// A name variant split into honorifics and name words.
#[derive(Debug, Clone)]
struct NameParts {
    words: Vec<String>,
    token_count: usize,
    gender: Gender,
}

impl NameParts {
    fn parse(name: &str, config: &CharacterConfig) -> Self {
        let mut words = Vec::new();
        let mut token_count = 0;
        let mut honorific_gender = None;
        for raw in name.split_whitespace() {
            let w = raw.trim_end_matches('.').to_lowercase();
            token_count += 1;
            // honorifics only count as such before the first name word
            match config.honorific_gender(&w) {
                Some(g) if words.is_empty() => {
                    if honorific_gender.is_none() && g != Gender::Unknown {
                        honorific_gender = Some(g);
                    }
                }
                _ => words.push(w),
            }
        }
        let gender = honorific_gender.unwrap_or_else(|| {
            words
                .first()
                .and_then(|w| config.name_genders.get(w).copied())
                .unwrap_or(Gender::Unknown)
        });
        Self {
            words,
            token_count,
            gender,
        }
    }

    fn is_subset_of(&self, other: &NameParts) -> bool {
        self.words.iter().all(|w| other.words.contains(w))
    }
}

fn first_names_compatible(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    let initial = |s: &str| s.chars().count() == 1;
    (initial(a) && b.starts_with(a)) || (initial(b) && a.starts_with(b))
}

/// Whether two variants name the same person under the alias rules.
fn joinable(a: &NameParts, b: &NameParts) -> bool {
    if a.words.is_empty() || b.words.is_empty() || !a.gender.compatible(b.gender) {
        return false;
    }
    if a.is_subset_of(b) || b.is_subset_of(a) {
        return true;
    }
    a.words.last() == b.words.last() && first_names_compatible(&a.words[0], &b.words[0])
}

/// Whether two variants can never share a cluster.
fn conflicts(a: &NameParts, b: &NameParts) -> bool {
    !a.gender.compatible(b.gender) || (a.words.len() > 1 && b.words.len() > 1 && !joinable(a, b))
}

struct Variant {
    text: String,
    parts: NameParts,
    mention_indices: Vec<usize>,
    first_pos: usize,
}

/// Groups proper-name mentions into characters and writes the cluster id
/// back into each proper-name mention.
///
/// Variants are processed longest first (by name words), so full names seed
/// clusters and shorter variants attach to them. A variant that fits several
/// clusters goes to the one with more mentions, then the earlier one.
pub fn cluster_names(mentions: &mut [Mention], config: &CharacterConfig) -> Vec<CharacterCluster> {
    let mut by_text: HashMap<&str, usize> = HashMap::new();
    let mut variants: Vec<Variant> = Vec::new();
    let mut order: Vec<usize> = (0..mentions.len())
        .filter(|&i| mentions[i].kind == MentionKind::ProperName)
        .collect();
    order.sort_by_key(|&i| mentions[i].token_range);
    for &mi in &order {
        let m = &mentions[mi];
        let vi = *by_text.entry(m.text.as_str()).or_insert_with(|| {
            variants.push(Variant {
                text: m.text.clone(),
                parts: NameParts::parse(&m.text, config),
                mention_indices: Vec::new(),
                first_pos: m.token_range.0,
            });
            variants.len() - 1
        });
        variants[vi].mention_indices.push(mi);
    }
    drop(by_text);

    let mut processing: Vec<usize> = (0..variants.len()).collect();
    processing.sort_by(|&a, &b| {
        let (va, vb) = (&variants[a], &variants[b]);
        vb.parts
            .words
            .len()
            .cmp(&va.parts.words.len())
            .then(vb.mention_indices.len().cmp(&va.mention_indices.len()))
            .then(va.first_pos.cmp(&vb.first_pos))
            .then(va.text.cmp(&vb.text))
    });

    // members: variant indices; count: mentions so far; first: earliest position
    struct Building {
        members: Vec<usize>,
        count: usize,
        first: usize,
    }
    let mut building: Vec<Building> = Vec::new();
    for &vi in &processing {
        let v = &variants[vi];
        let best = building
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.members.iter().any(|&a| joinable(&v.parts, &variants[a].parts))
                    && !c.members.iter().any(|&a| conflicts(&v.parts, &variants[a].parts))
            })
            .max_by(|(_, x), (_, y)| x.count.cmp(&y.count).then(y.first.cmp(&x.first)))
            .map(|(ci, _)| ci);
        match best {
            Some(ci) => {
                let c = &mut building[ci];
                c.members.push(vi);
                c.count += v.mention_indices.len();
                c.first = c.first.min(v.first_pos);
            }
            None => building.push(Building {
                members: vec![vi],
                count: v.mention_indices.len(),
                first: v.first_pos,
            }),
        }
    }

    // ids follow first appearance in the text
    building.sort_by_key(|c| c.first);
    let mut clusters = Vec::with_capacity(building.len());
    for (cluster_id, c) in building.into_iter().enumerate() {
        let canonical = c
            .members
            .iter()
            .map(|&vi| &variants[vi])
            .max_by(|a, b| {
                a.parts
                    .words
                    .len()
                    .cmp(&b.parts.words.len())
                    .then(a.parts.token_count.cmp(&b.parts.token_count))
                    .then(a.mention_indices.len().cmp(&b.mention_indices.len()))
                    .then(b.first_pos.cmp(&a.first_pos))
            })
            .expect("cluster has a member");
        let gender = c
            .members
            .iter()
            .map(|&vi| variants[vi].parts.gender)
            .find(|g| *g != Gender::Unknown)
            .unwrap_or(Gender::Unknown);
        let mut mention_indices: Vec<usize> = c
            .members
            .iter()
            .flat_map(|&vi| variants[vi].mention_indices.iter().copied())
            .collect();
        mention_indices.sort_by_key(|&i| mentions[i].token_range);
        for &mi in &mention_indices {
            mentions[mi].cluster_id = Some(cluster_id);
        }
        clusters.push(CharacterCluster {
            cluster_id,
            canonical_name: canonical.text.clone(),
            aliases: c.members.iter().map(|&vi| variants[vi].text.clone()).collect(),
            gender,
            mention_count: mention_indices.len(),
            mention_indices,
        });
    }
    clusters
}

/// Binds each pronoun to the nearest preceding proper-name mention within
/// `pronoun_window` sentences whose cluster gender is compatible. Pronouns
/// without such a candidate stay unresolved. Bound pronouns are added to
/// their cluster's mention list.
pub fn resolve_pronouns(mentions: &mut [Mention], clusters: &mut [CharacterCluster], config: &CharacterConfig) {
    let mut order: Vec<usize> = (0..mentions.len()).collect();
    order.sort_by_key(|&i| mentions[i].token_range);
    // resolved mentions so far: (sentence, clause, cluster), in text order
    let mut history: Vec<(usize, usize, usize)> = Vec::new();
    for &mi in &order {
        let found = match mentions[mi].kind {
            MentionKind::ProperName => mentions[mi].cluster_id,
            MentionKind::Pronoun => {
                let pron = &mentions[mi];
                let in_window = history
                    .iter()
                    .rposition(|&(s, _, _)| pron.sentence_index - s > config.pronoun_window)
                    .map_or(0, |p| p + 1);
                // most recent sentence first; within a sentence, earliest
                // (subject-like) mention first
                let mut candidates: Vec<(usize, usize, usize)> = history[in_window..]
                    .iter()
                    .enumerate()
                    .filter(|(_, &(_, clause, cid))| {
                        clusters[cid].gender.compatible(pron.gender) && !(pron.object && clause == pron.clause)
                    })
                    .map(|(k, &(s, _, cid))| (s, k, cid))
                    .collect();
                candidates.sort_by_key(|&(s, k, _)| (std::cmp::Reverse(s), k));
                // a known matching gender beats an unknown one
                candidates
                    .iter()
                    .find(|&&(_, _, cid)| pron.gender != Gender::Unknown && clusters[cid].gender == pron.gender)
                    .or(candidates.first())
                    .map(|&(_, _, cid)| cid)
            }
        };
        mentions[mi].cluster_id = found;
        if let Some(cid) = found {
            history.push((mentions[mi].sentence_index, mentions[mi].clause, cid));
        }
    }
    for c in clusters.iter_mut() {
        c.mention_indices.clear();
    }
    for &mi in &order {
        if let Some(cid) = mentions[mi].cluster_id {
            clusters[cid].mention_indices.push(mi);
        }
    }
    for c in clusters.iter_mut() {
        c.mention_count = c.mention_indices.len();
    }
}

/// Mentions and clusters for one document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CharacterSet {
    pub mentions: Vec<Mention>,
    pub clusters: Vec<CharacterCluster>,
}

impl CharacterSet {
    pub fn cluster_by_name(&self, name: &str) -> Option<&CharacterCluster> {
        let lower = name.to_lowercase();
        self.clusters
            .iter()
            .find(|c| c.canonical_name.to_lowercase() == lower)
            .or_else(|| {
                self.clusters
                    .iter()
                    .find(|c| c.aliases.iter().any(|a| a.to_lowercase() == lower))
            })
    }

    /// Cluster whose alias matches `text` exactly, preferring the cluster
    /// with more mentions.
    pub fn cluster_for_alias(&self, text: &str) -> Option<usize> {
        self.clusters
            .iter()
            .filter(|c| c.aliases.contains(text))
            .max_by_key(|c| (c.mention_count, std::cmp::Reverse(c.cluster_id)))
            .map(|c| c.cluster_id)
    }

    pub fn unresolved_pronouns(&self) -> usize {
        self.mentions
            .iter()
            .filter(|m| m.kind == MentionKind::Pronoun && m.cluster_id.is_none())
            .count()
    }
}

pub fn extract_characters(doc: &Document, config: &CharacterConfig) -> CharacterSet {
    let mut mentions = detect_mentions(doc, config);
    let mut clusters = cluster_names(&mut mentions, config);
    resolve_pronouns(&mut mentions, &mut clusters, config);
    CharacterSet { mentions, clusters }
}
