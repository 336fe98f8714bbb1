//! Scores sentences with the bundled lexicons and combines sentiment and
//! emotions into one circumstance value per event.
//!
//!     cargo run --example score_circumstance -- "She wept at the grave."

use narrative_arcs::events::VerbLexicon;
use narrative_arcs::scoring::{
    circumstance, score_emotions, score_sentiment, CircumstanceParams, EmotionLexicon, SentimentLexicon,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sentences: Vec<String> = match std::env::args().nth(1) {
        Some(s) => vec![s],
        None => [
            "Frodo wept bitterly.",
            "Sam laughed with joy and hugged his friend.",
            "The orcs attacked the village and the people fled in terror.",
            "They walked along the road.",
        ]
        .map(str::to_owned)
        .to_vec(),
    };
    let sentiment = SentimentLexicon::bundled();
    let emotions = EmotionLexicon::bundled();
    let lemmas = VerbLexicon::bundled();
    let params = CircumstanceParams::default();
    for s in &sentences {
        let v = score_sentiment(s, &sentiment, &lemmas);
        let e = score_emotions(s, &emotions, &lemmas);
        let t = circumstance(v, &e, &params)?;
        let labels: Vec<String> = e.iter().map(|x| format!("{}:{:.2}", x.label, x.confidence)).collect();
        println!("t={t:+.3}  s={v:.3}  [{}]  {s}", labels.join(" "));
    }
    Ok(())
}
