//! Cleans a raw text and prints its sentences with word counts.
//!
//!     cargo run --example clean_and_segment -- story.txt

use narrative_arcs::corpus::{clean, corpus_stats, CleaningConfig, Segmenter};

const DEMO: &str = "CHAPTER ONE\n\n- 3 -\n\nMr. Sawyer left the house at dawn. He walked to \
the mill (see www.example.org for a map).\n\n\"Stop!\" cried Tom. Dr. Robinson turned around.";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEMO.to_owned(),
    };
    let text = clean(&raw, &CleaningConfig::default())?;
    let doc = Segmenter::default().segment("demo", &raw, &text);
    for s in &doc.sentences {
        println!("{:>4}  {}", s.index, doc.sentence_text(s.index));
    }
    let stats = corpus_stats(&doc);
    println!("\n{} words in {} sentences", stats.word_count, stats.sentence_count);
    Ok(())
}
