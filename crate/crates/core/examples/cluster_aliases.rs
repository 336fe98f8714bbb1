//! Finds character mentions, groups name variants and resolves pronouns.
//!
//!     cargo run --example cluster_aliases

use narrative_arcs::characters::{extract_characters, CharacterConfig};
use narrative_arcs::corpus::{load_document, CleaningConfig, Segmenter};

const TEXT: &str = "Tom Sawyer painted the fence while Ben Rogers watched. Tom whistled. \
Mr. Sawyer was nowhere to be seen. Aunt Polly called him from the porch, and she sounded cross. \
Ben laughed at Tom. Polly frowned at Ben.";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = load_document("tom", TEXT, &CleaningConfig::default(), &Segmenter::default())?;
    let set = extract_characters(&doc, &CharacterConfig::default());
    for c in &set.clusters {
        let aliases: Vec<&str> = c.aliases.iter().map(String::as_str).collect();
        println!(
            "{:<12} {:?} mentions={} aliases={aliases:?}",
            c.canonical_name, c.gender, c.mention_count
        );
    }
    for m in set
        .mentions
        .iter()
        .filter(|m| m.kind == narrative_arcs::characters::MentionKind::Pronoun)
    {
        let who = m.cluster_id.map_or("?", |id| set.clusters[id].canonical_name.as_str());
        println!("  sentence {}: {} -> {who}", m.sentence_index, m.text);
    }
    println!("unresolved pronouns: {}", set.unresolved_pronouns());
    Ok(())
}
