//! Adds the extra exclusive gates to the four-qutrit circuit and compares how
//! many basis states pick up Fourier factors.

use nlwe::ensembles::{extended_circuit_fig4, fig3_circuit, local_factor_census};
use nlwe::linalg::party_label;

fn main() -> nlwe::Result<()> {
    let base = fig3_circuit();
    let extended = extended_circuit_fig4();
    print!("{extended}");
    println!("pairwise exclusive: {}", extended.is_exclusive());

    for (name, circuit) in [("cyclic", &base), ("extended", &extended)] {
        let basis = circuit.generate_basis()?;
        println!(
            "\n{name}: {} gates, {} states, {} with a DFT factor, {} DFT factors in total",
            circuit.gates().len(),
            basis.len(),
            basis.states_with_dft(),
            basis.dft_factor_count()
        );
        for p in 0..basis.dims().parties() {
            let census = local_factor_census(&basis, p);
            let labels: Vec<String> = census.iter().map(|(k, v)| format!("{k}x{v}")).collect();
            println!("  {}: {}", party_label(p), labels.join(" "));
        }
    }
    Ok(())
}
