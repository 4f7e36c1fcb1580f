//! Extracts a UPB from a preset circuit and runs the exhaustive
//! extendibility search on it and on its leave-one-out subsets.
//!
//! ```text
//! cargo run --example upb_extraction -- shift all=0
//! cargo run --release --example upb_extraction -- fig3
//! ```

use nlwe::ensembles::Preset;
use nlwe::upb::{extract_upb, minimal_size, parse_excluded, search_extension};

fn main() -> nlwe::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().as_deref().unwrap_or("shift").parse()?;
    let circuit = preset.circuit()?;
    let defaults = preset.default_excluded(circuit.dims());
    let excluded = match args.next() {
        Some(text) => parse_excluded(&text, circuit.dims(), &defaults)?,
        None => defaults,
    };

    let upb = extract_upb(&circuit, &excluded)?;
    println!("{} members (minimal size {}):", upb.len(), minimal_size(upb.dims()));
    for (i, s) in upb.states().iter().enumerate() {
        let mark = if i == upb.stopper_index() { "  <- stopper" } else { "" };
        println!("  {s}{mark}");
    }

    let search = search_extension(upb.states(), upb.dims(), 1e-9)?;
    println!(
        "\nextendible: {} ({} placements tried, bound {})",
        search.extendible, search.assignments_examined, search.assignment_bound
    );
    if let Some(w) = &search.witness {
        println!("orthogonal product state: {w}");
        let worst = upb.states().iter().map(|s| s.overlap(w).norm()).fold(0.0, f64::max);
        println!("largest overlap with a member: {worst:.3e}");
    }

    println!("\nleave-one-out:");
    for i in 0..upb.len() {
        let subset = upb.without(i);
        let s = search_extension(&subset, upb.dims(), 1e-9)?;
        let witness = s.witness.map(|w| w.to_string()).unwrap_or_else(|| "-".into());
        println!("  without #{}: extendible {}  witness {witness}", i + 1, s.extendible);
    }
    Ok(())
}
