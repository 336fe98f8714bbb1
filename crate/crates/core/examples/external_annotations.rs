//! Merges hand-made annotations into the heuristic event list and shows the
//! records they change.
//!
//!     cargo run --example external_annotations

use narrative_arcs::config::PipelineConfig;
use narrative_arcs::events::{lint_annotations, TriggerSource};
use narrative_arcs::pipeline::analyze;

const STORY: &str = include_str!("../fixtures/lantern/lantern.txt");
const NOTES: &str = include_str!("../fixtures/lantern/lantern.annotations.jsonl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let res = PipelineConfig::default().resources()?;
    let plain = analyze("lantern", STORY, None, &res)?;
    let errors = lint_annotations(NOTES, Some(&plain.doc));
    println!("{} annotation problems", errors.len());

    let merged = analyze("lantern", STORY, Some(NOTES), &res)?;
    let name = |id: Option<usize>| id.map_or("-".to_owned(), |i| merged.characters.clusters[i].canonical_name.clone());
    for r in merged
        .records
        .iter()
        .filter(|r| r.trigger.source == TriggerSource::External)
    {
        let before = plain
            .records
            .iter()
            .find(|p| p.trigger.token_index == r.trigger.token_index);
        let was = before.map_or("(not tagged)".to_owned(), |p| {
            format!("s={:.3} {} -> {}", p.sentiment, name(p.actor), name(p.experiencer))
        });
        let emotions: Vec<String> = r
            .emotions
            .iter()
            .map(|e| format!("{}:{}", e.label, e.confidence))
            .collect();
        println!(
            "{:<11} s={:.3} {} -> {} [{}]   was {was}",
            r.trigger.surface,
            r.sentiment,
            name(r.actor),
            name(r.experiencer),
            emotions.join(" ")
        );
    }
    println!(
        "heuristic only: {} triggers; with annotations: {}",
        plain.triggers.len(),
        merged.triggers.len()
    );
    Ok(())
}
