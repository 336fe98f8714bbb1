//! Tags realis event triggers line by line and, for the bundled sample,
//! scores them against the hand-annotated gold list.
//!
//!     cargo run --example tag_events
//!     cargo run --example tag_events -- my_sentences.txt

use std::fs;

use narrative_arcs::corpus::{load_document, CleaningConfig, Segmenter};
use narrative_arcs::evalkit::match_items;
use narrative_arcs::events::{tag_events, TaggerConfig, VerbLexicon};

const SAMPLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/realis/sample.txt");
const GOLD: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/realis/gold.tsv");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arg = std::env::args().nth(1);
    let text = fs::read_to_string(arg.as_deref().unwrap_or(SAMPLE))?;
    let verbs = VerbLexicon::bundled();
    let tagger = TaggerConfig::default();
    let segmenter = Segmenter::default();

    let mut system = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let doc = load_document("line", line, &CleaningConfig::default(), &segmenter)?;
        let found: Vec<String> = tag_events(&doc, &verbs, &tagger)
            .into_iter()
            .map(|t| t.surface.to_lowercase())
            .collect();
        println!("{:>3}  {:<28} {}", i + 1, found.join(","), line);
        system.push(found);
    }

    if arg.is_none() {
        let gold: Vec<Vec<String>> = fs::read_to_string(GOLD)?
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| {
                let words = l.split('\t').nth(1).unwrap_or("");
                words.split(',').filter(|w| !w.is_empty()).map(str::to_owned).collect()
            })
            .collect();
        let c = match_items(&system, &gold)?;
        println!(
            "\nmatched {} spurious {} missed {}  precision {:.3} recall {:.3}",
            c.matched,
            c.spurious,
            c.missed,
            c.precision().unwrap_or(0.0),
            c.recall().unwrap_or(0.0)
        );
    }
    Ok(())
}
