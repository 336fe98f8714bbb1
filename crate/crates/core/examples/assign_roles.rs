//! Tags events, fills actor and experiencer roles and drops repeats of the
//! same pair within a sentence.
//!
//!     cargo run --example assign_roles

use narrative_arcs::characters::{extract_characters, CharacterConfig};
use narrative_arcs::corpus::{load_document, CleaningConfig, Segmenter};
use narrative_arcs::events::{tag_events, TaggerConfig, VerbLexicon};
use narrative_arcs::participants::{assign_roles, dedupe_sentence_events};

const TEXT: &str = "Harry kicked Ron and then punched Ron. Ron was hit by Hermione. \
Hermione laughed. Harry would never betray Ron. Ron thanked Harry.";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = load_document("roles", TEXT, &CleaningConfig::default(), &Segmenter::default())?;
    let chars = extract_characters(&doc, &CharacterConfig::default());
    let verbs = VerbLexicon::bundled();
    let triggers = tag_events(&doc, &verbs, &TaggerConfig::default());
    let records = assign_roles(&doc, &triggers, &chars, &[]);
    let kept = dedupe_sentence_events(records.clone());
    let name = |id: Option<usize>| id.map_or("-", |i| chars.clusters[i].canonical_name.as_str());
    for r in &records {
        let mark = if kept.contains(r) { " " } else { "x" };
        println!(
            "{mark} s{} {:<9} actor={:<9} experiencer={:<9} passive={} self={}",
            r.sentence_index(),
            r.trigger.surface,
            name(r.actor),
            name(r.experiencer),
            r.passive,
            r.self_relation
        );
    }
    println!(
        "{} events with characters, {} after dropping repeated pairs",
        records.len(),
        kept.len()
    );
    Ok(())
}
