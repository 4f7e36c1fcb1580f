//! Completes a UPB to an orthonormal product basis across each single-party
//! cut, which shows the complement state is separable across that cut.
//!
//! ```text
//! cargo run --example separability -- shift
//! cargo run --release --example separability -- fig3
//! ```

use nlwe::bound_ent::{cut_label, separability_completion};
use nlwe::ensembles::Preset;
use nlwe::linalg::gram_deviation;
use nlwe::upb::extract_upb;

fn main() -> nlwe::Result<()> {
    let preset: Preset = std::env::args().nth(1).as_deref().unwrap_or("shift").parse()?;
    let circuit = preset.circuit()?;
    let upb = extract_upb(&circuit, &preset.default_excluded(circuit.dims()))?;
    let dims = upb.dims();
    for party in 0..dims.parties() {
        let completion = separability_completion(&upb, party, 1e-9)?;
        let dense = completion.dense(dims);
        println!(
            "{:<8} {} + {} states, dim S' = {}, gram deviation {:.3e}",
            cut_label(&[party], dims.parties()),
            completion.original,
            completion.states.len() - completion.original,
            completion.s_prime_dim,
            gram_deviation(&dense)?
        );
    }
    Ok(())
}
