//! Runs every stage on a text file and writes the artifact bundle.
//!
//!     cargo run --example full_pipeline -- story.txt out/

use std::path::{Path, PathBuf};

use narrative_arcs::config::PipelineConfig;
use narrative_arcs::pipeline::{doc_id_for, read_input, run_pipeline, write_files, ArcOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/lantern/lantern.txt"));
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("narc-example"));

    let res = PipelineConfig::default().resources()?;
    let raw = read_input(&input)?;
    let bundle = run_pipeline(&doc_id_for(&input), &raw, None, &res, &ArcOptions::from_resources(&res))?;
    write_files(&out, &bundle.files)?;
    for path in bundle.files.keys() {
        println!("{}", out.join(path).display());
    }
    println!("{}", serde_json::to_string_pretty(&bundle.stats)?);
    Ok(())
}
