//! Compares the three window functions on a noisy series and prints the
//! Savitzky-Golay weights for a few window sizes.
//!
//!     cargo run --example smooth_series

use narrative_arcs::arcs::{apply_window, savgol_coefficients, FilterKind, WindowSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, p) in [(5, 2), (7, 3), (9, 4)] {
        let w = savgol_coefficients(n, p, 0)?;
        let shown: Vec<String> = w.iter().map(|x| format!("{x:+.4}")).collect();
        println!("savgol n={n} p={p}: {}", shown.join(" "));
    }
    let raw: Vec<f64> = (0..24)
        .map(|i| {
            let x = i as f64 / 4.0;
            x.sin() + if i % 3 == 0 { 0.6 } else { -0.3 }
        })
        .collect();
    let specs = [
        WindowSpec::new(FilterKind::RollingMean, 5, None)?,
        WindowSpec::new(FilterKind::TriangularMean, 5, None)?,
        WindowSpec::savgol(7, 3)?,
    ];
    let smoothed: Vec<Vec<f64>> = specs.iter().map(|s| apply_window(&raw, s).values).collect();
    println!("\n  i     raw    mean     tri  savgol");
    for i in 0..raw.len() {
        println!(
            "{i:>3} {:>7.3} {:>7.3} {:>7.3} {:>7.3}",
            raw[i], smoothed[0][i], smoothed[1][i], smoothed[2][i]
        );
    }
    let short = apply_window(&raw[..3], &specs[2]);
    println!(
        "\nthree points through a 7-wide window: passthrough={}",
        short.passthrough
    );
    Ok(())
}
