//! Builds the cyclic `n`-party circuit for arbitrary local dimensions and
//! compares symbolic and dense gate application state by state.
//!
//! ```text
//! cargo run --release --example canonical_circuit -- 4 3
//! cargo run --release --example canonical_circuit -- 4 3,3,4,3
//! ```

use std::time::Instant;

use nlwe::ensembles::{canonical_circuit, local_factor_census};
use nlwe::linalg::{party_label, DimVector};

fn main() -> nlwe::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(4), |s| s.parse()).expect("n must be an integer");
    let dims: Vec<usize> = match args.next() {
        Some(s) => s.split(',').map(|x| x.trim().parse().expect("dimension must be an integer")).collect(),
        None => vec![n - 1],
    };
    let dims = if dims.len() == 1 { vec![dims[0]; n] } else { dims };
    let dims = DimVector::new(dims)?;

    let circuit = canonical_circuit(n, &dims)?;
    print!("{circuit}");

    let start = Instant::now();
    let basis = circuit.generate_basis()?;
    println!("\ngenerated {} states of dimension {} in {:.2?}", basis.len(), dims.total(), start.elapsed());
    println!("gram deviation          {:.3e}", basis.gram_deviation()?);

    let mut worst = 0.0_f64;
    for (index, state) in basis.states().iter().enumerate() {
        let dense = circuit.apply_dense(&dims.digits(index))?;
        worst = worst.max(dense.max_abs_diff(&state.render()));
    }
    println!("symbolic vs dense       {worst:.3e}");

    for p in 0..n {
        let census = local_factor_census(&basis, p);
        let labels: Vec<String> = census.iter().map(|(k, v)| format!("{k}x{v}")).collect();
        println!("party {}: {}", party_label(p), labels.join(" "));
    }
    Ok(())
}
