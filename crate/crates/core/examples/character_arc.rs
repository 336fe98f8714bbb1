//! Builds one character's actor and experiencer arcs from the bundled story
//! and lists their peaks and valleys.
//!
//!     cargo run --example character_arc -- "Martha Quill"

use narrative_arcs::arcs::{build_character_arc, find_extrema, Role};
use narrative_arcs::config::PipelineConfig;
use narrative_arcs::pipeline::analyze;

const STORY: &str = include_str!("../fixtures/lantern/lantern.txt");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let who = std::env::args().nth(1).unwrap_or_else(|| "Elena Marsh".to_owned());
    let cfg = PipelineConfig::default();
    let res = cfg.resources()?;
    let analysis = analyze("lantern", STORY, None, &res)?;
    let cluster = analysis
        .characters
        .cluster_by_name(&who)
        .ok_or_else(|| format!("no character named {who}"))?;
    let arc = build_character_arc(cluster.cluster_id, &analysis.records, &res.params, &res.window)?;
    for role in [Role::Actor, Role::Experiencer] {
        let series = arc.series(role);
        let values = series.smoothed();
        let window = series
            .window
            .map_or("none".to_owned(), |w| format!("{} n={}", w.kind(), w.size()));
        println!(
            "{} as {role}: {} events, window {window}",
            cluster.canonical_name,
            series.len()
        );
        for e in find_extrema(&values, cfg.min_prominence) {
            let p = &series.points[e.index];
            println!(
                "  {:?} at event {} (sentence {}), t={:+.3}, prominence {:.3}",
                e.kind, p.event_id, p.sentence_index, p.smoothed_t, e.prominence
            );
        }
    }
    Ok(())
}
