//! Draws a two-line arc chart with lettered extrema markers.
//!
//!     cargo run --example render_svg > arc.svg

use narrative_arcs::arcs::{find_extrema, Role};
use narrative_arcs::render::{render_arc_svg, ArcPlot, Marker, SvgStyle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let actor: Vec<f64> = (0..40).map(|i| (i as f64 / 6.0).sin() * 0.8 + 0.2).collect();
    let experiencer: Vec<f64> = (0..28).map(|i| (i as f64 / 4.0).cos() * 0.6 - 0.1).collect();
    let mut markers = Vec::new();
    for (role, series) in [(Role::Actor, &actor), (Role::Experiencer, &experiencer)] {
        for e in find_extrema(series, 0.2) {
            markers.push(Marker {
                role,
                index: e.index,
                kind: e.kind,
            });
        }
    }
    let plot = ArcPlot {
        title: "Example character".to_owned(),
        actor,
        experiencer,
        markers,
    };
    print!("{}", render_arc_svg(&plot, &SvgStyle::default())?);
    Ok(())
}
