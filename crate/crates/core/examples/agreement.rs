//! Survey-style evaluation: accuracy and Fleiss' kappa over rater answers,
//! then a shift confusion table against gold labels.
//!
//!     cargo run --example agreement

use std::collections::BTreeMap;

use narrative_arcs::evalkit::{fleiss_kappa, label_shifts, shift_confusion, RaterResponses, Shift, ShiftLabel};

const RESPONSES: &str = "item_id,rater_id,answer
q1,ana,A
q1,ben,A
q1,cho,A
q1,dev,B
q2,ana,C
q2,ben,C
q2,cho,C
q2,dev,C
q3,ana,B
q3,ben,A
q3,cho,B
q3,dev,B
q4,ana,D
q4,ben,D
q4,cho,A
q4,dev,D
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let responses = RaterResponses::from_csv(RESPONSES.as_bytes())?;
    let gold: BTreeMap<String, String> = [("q1", "A"), ("q2", "C"), ("q3", "B"), ("q4", "A")]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .collect();
    println!("accuracy against gold: {:.3}", responses.accuracy_against(&gold)?);
    println!(
        "kappa over answers:    {:.3}",
        fleiss_kappa(&responses.category_counts())?
    );
    println!(
        "kappa match/no match:  {:.3}",
        fleiss_kappa(&responses.match_counts(&gold)?)?
    );

    let arc = [0.1, 0.4, 0.45, 0.2, -0.3, -0.35, 0.1, 0.6, 0.58, 0.9];
    let ids: Vec<usize> = (0..arc.len()).map(|i| i * 3).collect();
    let system = label_shifts(&arc, &ids, 0.1);
    let gold_labels = [
        Shift::Positive,
        Shift::Neutral,
        Shift::Negative,
        Shift::Negative,
        Shift::Neutral,
        Shift::Positive,
        Shift::Positive,
        Shift::Negative,
        Shift::Positive,
    ];
    let gold_shifts: Vec<ShiftLabel> = system
        .iter()
        .zip(gold_labels)
        .map(|(s, label)| ShiftLabel {
            event_id: s.event_id,
            label,
        })
        .collect();
    print!("\n{}", shift_confusion(&system, &gold_shifts)?.to_text());
    Ok(())
}
