//! Generates the three-qubit SHIFT basis from its control-DFT circuit and
//! checks it: orthonormality, gate exclusivity, and commutation.
//!
//! ```text
//! cargo run --example shift_ensemble
//! ```

use nlwe::circuit::COMMUTATION_TOL;
use nlwe::ensembles::{oneway_set, shift_circuit};

fn main() -> nlwe::Result<()> {
    let circuit = shift_circuit();
    print!("{circuit}");

    let basis = circuit.generate_basis()?;
    println!("\n{} states:", basis.len());
    for s in basis.states() {
        println!("  {s}");
    }
    println!("gram deviation        {:.3e}", basis.gram_deviation()?);

    let exclusivity = circuit.validate_exclusivity();
    let commutation = circuit.check_commutation(COMMUTATION_TOL);
    println!("pairwise exclusive    {}", exclusivity.passed());
    println!(
        "max commutator entry  {:.3e}",
        commutation.max_residual().unwrap_or(0.0)
    );

    println!("\ntwo-qubit one-way set:");
    for s in oneway_set().states() {
        println!("  {s}");
    }
    Ok(())
}
