//! Actor and experiencer assignment for event triggers.
//!
//! Roles come from linear proximity inside the sentence: the subject is the
//! nearest character mention before the verb, the object the nearest one
//! after it. Passive verb groups swap the two, with a `by` phrase supplying
//! the actor. Coordinated verbs ("kicked and punched Ron") share their
//! subject and object.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::characters::{CharacterSet, Mention, MentionKind};
use crate::corpus::{Document, TokenSpan};
use crate::events::{AnnotationRecord, CharSpan, EventTrigger};
use crate::scoring::EmotionScore;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub event_id: usize,
    pub trigger: EventTrigger,
    pub actor: Option<usize>,
    pub experiencer: Option<usize>,
    pub passive: bool,
    /// One participant was found and fills both roles.
    pub self_relation: bool,
    /// In (0, 1); 0.5 until scored.
    pub sentiment: f64,
    pub emotions: Vec<EmotionScore>,
}

impl EventRecord {
    pub fn sentence_index(&self) -> usize {
        self.trigger.sentence_index
    }

    /// The directed pair, once both roles are known.
    pub fn pair(&self) -> Option<(usize, usize)> {
        Some((self.actor?, self.experiencer?))
    }
}

const COORDINATORS: [&str; 5] = ["and", "or", "then", ",", "also"];
const CLAUSE_BREAKS: [&str; 11] = [
    "and", "but", "or", ",", ";", "then", "while", "as", "when", "because", "so",
];
const PASSIVE_AUXILIARIES: [&str; 9] = ["was", "were", "is", "are", "am", "been", "being", "got", "get"];

fn is_adverb(t: &TokenSpan) -> bool {
    t.is_word && t.lowercase.ends_with("ly")
}

fn is_coordinator(t: &TokenSpan) -> bool {
    COORDINATORS.contains(&t.lowercase.as_str())
}

/// Mentions that can fill a role: proper names and resolved, non-possessive
/// pronouns.
fn role_mentions(mentions: &[Mention]) -> Vec<&Mention> {
    let mut out: Vec<&Mention> = mentions
        .iter()
        .filter(|m| m.cluster_id.is_some() && !m.possessive)
        .collect();
    out.sort_by_key(|m| m.token_range);
    out
}

struct SentenceView<'a> {
    tokens: &'a [TokenSpan],
    /// (start, end, cluster, is_pronoun) in document token indices.
    mentions: Vec<(usize, usize, usize, bool)>,
    /// Trigger token indices, ascending.
    triggers: Vec<usize>,
}

impl SentenceView<'_> {
    fn only_coordination_between(&self, from: usize, to: usize) -> bool {
        (from + 1..to).all(|k| {
            let t = &self.tokens[k];
            is_coordinator(t) || is_adverb(t)
        })
    }

    fn previous_trigger(&self, tok: usize) -> Option<usize> {
        self.triggers.iter().rev().find(|&&t| t < tok).copied()
    }

    fn next_trigger(&self, tok: usize) -> Option<usize> {
        self.triggers.iter().find(|&&t| t > tok).copied()
    }

    /// Nearest mention ending at or before `tok`, after `floor`. Ties go to
    /// proper names, then the earlier mention.
    fn nearest_before(&self, tok: usize, floor: Option<usize>) -> Option<usize> {
        self.mentions
            .iter()
            .filter(|m| m.1 <= tok && floor.is_none_or(|f| m.0 > f))
            .min_by_key(|m| (tok - m.1, m.3, m.0))
            .map(|m| m.2)
    }

    /// Subject of the trigger at `tok`: coordinated verbs without their own
    /// subject inherit the previous verb's subject.
    fn subject(&self, tok: usize) -> Option<usize> {
        let prev = self.previous_trigger(tok);
        let mut k = tok;
        while k > 0 && is_adverb(&self.tokens[k - 1]) {
            k -= 1;
        }
        if let Some(p) = prev {
            let coordinated = k > 0 && k - 1 > p && is_coordinator(&self.tokens[k - 1]);
            let mention_between = self.mentions.iter().any(|m| m.0 >= k && m.1 <= tok);
            if coordinated && !mention_between {
                if let Some(s) = self.subject(p) {
                    return Some(s);
                }
            }
        }
        self.nearest_before(tok, prev)
    }

    /// Mentions between the trigger and the next non-coordinated trigger.
    fn object_region(&self, tok: usize) -> (usize, usize) {
        let mut end = self.tokens.len();
        let mut cur = tok;
        while let Some(next) = self.next_trigger(cur) {
            if self.only_coordination_between(cur, next) {
                cur = next;
                continue;
            }
            end = next;
            break;
        }
        (cur + 1, end)
    }

    fn object(&self, tok: usize) -> Option<usize> {
        let (from, to) = self.object_region(tok);
        let m = self.mentions.iter().find(|m| m.0 >= from && m.1 <= to)?;
        // "kicked the door and Ron laughed": Ron opens the next clause
        let clause_break = (tok + 1..m.0).any(|k| CLAUSE_BREAKS.contains(&self.tokens[k].lowercase.as_str()));
        let heads_next_verb =
            to < self.tokens.len() && self.triggers.contains(&to) && (m.1..to).all(|k| is_adverb(&self.tokens[k]));
        if clause_break && heads_next_verb {
            return None;
        }
        Some(m.2)
    }

    fn is_passive(&self, tok: usize) -> bool {
        if self.tokens[tok].lowercase.ends_with("ing") {
            return false;
        }
        let mut k = tok;
        while k > 0 && (is_adverb(&self.tokens[k - 1]) || self.tokens[k - 1].lowercase == "not") {
            k -= 1;
        }
        k > 0 && PASSIVE_AUXILIARIES.contains(&self.tokens[k - 1].lowercase.as_str())
    }

    fn by_phrase_actor(&self, tok: usize) -> Option<usize> {
        let (_, to) = self.object_region(tok);
        let by = (tok + 1..to).find(|&k| self.tokens[k].lowercase == "by")?;
        self.mentions
            .iter()
            .find(|m| m.0 > by && m.0 <= by + 2 && m.1 <= to)
            .map(|m| m.2)
    }
}

/// Assigns roles to every trigger and drops events without any character.
///
/// Fields of an external annotation (actor or experiencer span) override the
/// heuristic for that role. A single participant fills both roles.
pub fn assign_roles(
    doc: &Document,
    triggers: &[EventTrigger],
    characters: &CharacterSet,
    annotations: &[AnnotationRecord],
) -> Vec<EventRecord> {
    let mentions = role_mentions(&characters.mentions);
    let mut out = Vec::with_capacity(triggers.len());
    let mut mention_cursor = 0;
    let mut trigger_cursor = 0;

    for s in &doc.sentences {
        let sentence_triggers: Vec<&EventTrigger> = triggers[trigger_cursor..]
            .iter()
            .take_while(|t| t.token_index < s.end_token)
            .collect();
        trigger_cursor += sentence_triggers.len();
        while mention_cursor < mentions.len() && mentions[mention_cursor].token_range.0 < s.first_token {
            mention_cursor += 1;
        }
        if sentence_triggers.is_empty() {
            continue;
        }
        let base = s.first_token;
        let view = SentenceView {
            tokens: &doc.tokens[s.first_token..s.end_token],
            mentions: mentions[mention_cursor..]
                .iter()
                .take_while(|m| m.token_range.1 <= s.end_token)
                .map(|m| {
                    (
                        m.token_range.0 - base,
                        m.token_range.1 - base,
                        m.cluster_id.expect("role mentions are resolved"),
                        m.kind == MentionKind::Pronoun,
                    )
                })
                .collect(),
            triggers: sentence_triggers.iter().map(|t| t.token_index - base).collect(),
        };

        for trig in sentence_triggers {
            let tok = trig.token_index - base;
            let subject = view.subject(tok);
            let passive = view.is_passive(tok);
            let (mut actor, mut experiencer) = if passive {
                (view.by_phrase_actor(tok), subject)
            } else {
                (subject, view.object(tok))
            };
            if let Some(r) = trig.annotation.and_then(|i| annotations.get(i)) {
                if let Some(span) = r.actor {
                    actor = cluster_for_span(doc, characters, span);
                }
                if let Some(span) = r.experiencer {
                    experiencer = cluster_for_span(doc, characters, span);
                }
            }
            let self_relation = actor.is_none() != experiencer.is_none();
            let (actor, experiencer) = match (actor, experiencer) {
                (None, None) => continue,
                (Some(a), None) => (a, a),
                (None, Some(e)) => (e, e),
                (Some(a), Some(e)) => (a, e),
            };
            out.push(EventRecord {
                event_id: trig.event_id,
                trigger: trig.clone(),
                actor: Some(actor),
                experiencer: Some(experiencer),
                passive,
                self_relation,
                sentiment: 0.5,
                emotions: Vec::new(),
            });
        }
    }
    out
}

/// Cluster named by an annotation span: a resolved mention overlapping it,
/// else an exact alias match on the span text.
pub fn cluster_for_span(doc: &Document, characters: &CharacterSet, span: CharSpan) -> Option<usize> {
    let range = doc.tokens_in(span.start, span.end);
    if !range.is_empty() {
        let hit = characters
            .mentions
            .iter()
            .filter(|m| m.cluster_id.is_some())
            .find(|m| m.token_range.0 < range.end && m.token_range.1 > range.start);
        if let Some(m) = hit {
            return m.cluster_id;
        }
    }
    characters.cluster_for_alias(doc.slice(span.start, span.end).trim())
}

/// Keeps only the first event per (actor, experiencer) pair in each
/// sentence. Records must be in text order; the output is a subsequence.
pub fn dedupe_sentence_events(records: Vec<EventRecord>) -> Vec<EventRecord> {
    let mut seen: HashSet<(usize, Option<usize>, Option<usize>)> = HashSet::new();
    let mut sentence = None;
    records
        .into_iter()
        .filter(|r| {
            if sentence != Some(r.sentence_index()) {
                sentence = Some(r.sentence_index());
                seen.clear();
            }
            seen.insert((r.sentence_index(), r.actor, r.experiencer))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{extract_characters, CharacterConfig};
    use crate::corpus::Segmenter;
    use crate::events::{tag_events, TaggerConfig, VerbLexicon};

    struct Run {
        chars: CharacterSet,
        records: Vec<EventRecord>,
    }

    fn run(text: &str) -> Run {
        let doc = Segmenter::default().segment("d", text, text);
        let chars = extract_characters(&doc, &CharacterConfig::default());
        let triggers = tag_events(&doc, &VerbLexicon::bundled(), &TaggerConfig::default());
        let records = assign_roles(&doc, &triggers, &chars, &[]);
        Run { chars, records }
    }

    impl Run {
        fn roles(&self) -> Vec<(String, String, String)> {
            let name = |c: Option<usize>| self.chars.clusters[c.unwrap()].canonical_name.clone();
            self.records
                .iter()
                .map(|r| (r.trigger.surface.clone(), name(r.actor), name(r.experiencer)))
                .collect()
        }
    }

    fn triple(v: &str, a: &str, e: &str) -> (String, String, String) {
        (v.into(), a.into(), e.into())
    }

    #[test]
    fn active_sentence() {
        assert_eq!(run("Harry kicked Ron.").roles(), [triple("kicked", "Harry", "Ron")]);
    }

    #[test]
    fn passive_with_by_phrase() {
        let r = run("Ron was kicked by Harry.");
        assert_eq!(r.roles(), [triple("kicked", "Harry", "Ron")]);
        assert!(r.records[0].passive);
    }

    #[test]
    fn passive_without_agent_is_self_relation() {
        let r = run("Ron was kicked.");
        assert_eq!(r.roles(), [triple("kicked", "Ron", "Ron")]);
        assert!(r.records[0].self_relation);
    }

    #[test]
    fn intransitive_is_self_relation() {
        assert_eq!(run("Frodo wept.").roles(), [triple("wept", "Frodo", "Frodo")]);
    }

    #[test]
    fn events_without_characters_are_dropped() {
        assert!(run("The door creaked.").records.is_empty());
    }

    #[test]
    fn coordinated_verbs_share_roles() {
        let r = run("Harry kicked and punched Ron.");
        assert_eq!(
            r.roles(),
            [triple("kicked", "Harry", "Ron"), triple("punched", "Harry", "Ron")]
        );
        let deduped = dedupe_sentence_events(r.records);
        assert_eq!(deduped.len(), 1);
        assert_eq!(deduped[0].trigger.surface, "kicked");
    }

    #[test]
    fn coordinated_verb_phrase_keeps_subject() {
        let r = run("Harry kicked Ron and punched Draco.");
        assert_eq!(
            r.roles(),
            [triple("kicked", "Harry", "Ron"), triple("punched", "Harry", "Draco")]
        );
    }

    #[test]
    fn next_clause_subject_is_not_an_object() {
        let r = run("Harry kicked the door and Ron laughed.");
        assert_eq!(
            r.roles(),
            [triple("kicked", "Harry", "Harry"), triple("laughed", "Ron", "Ron")]
        );
    }

    #[test]
    fn resolved_pronouns_fill_roles() {
        let r = run("Harry ran. He hugged Hermione.");
        assert_eq!(
            r.roles(),
            [triple("ran", "Harry", "Harry"), triple("hugged", "Harry", "Hermione")]
        );
    }

    #[test]
    fn possessives_do_not_fill_roles() {
        let r = run("Harry hugged his friend.");
        assert_eq!(r.roles(), [triple("hugged", "Harry", "Harry")]);
    }

    #[test]
    fn dedupe_keeps_distinct_pairs_and_singletons() {
        let r = run("Harry kicked Ron and Ron hugged Harry.");
        assert_eq!(dedupe_sentence_events(r.records.clone()).len(), 2);
        let single = run("Harry kicked Ron.").records;
        assert_eq!(dedupe_sentence_events(single.clone()), single);
    }
}
