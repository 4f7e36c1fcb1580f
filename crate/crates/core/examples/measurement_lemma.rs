//! Checks that a single measurement branch keeping both the computational and
//! the Fourier basis orthogonal is proportional to an isometry.
//!
//! ```text
//! cargo run --example measurement_lemma -- 3 42 1000
//! ```

use nlwe::lemma::{lemma_check, survey, weyl_operator, KrausOperator, OperatorFamily, LEMMA_TOL};
use nlwe::linalg::{ComplexMatrix, C64};

fn main() -> nlwe::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer argument"));
    let d = args.next().unwrap_or(3) as usize;
    let seed = args.next().unwrap_or(42);
    let samples = args.next().unwrap_or(1000) as usize;

    let k = KrausOperator::new(ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.5, 0.0)]))?;
    let out = lemma_check(&k, LEMMA_TOL)?;
    println!("diag(1, 1/2): constraints hold {}, isotropy residual {:.3}", out.constraints_hold, out.isotropy_residual);

    let worst = (0..d * d)
        .map(|i| lemma_check(&weyl_operator(d, i / d, i % d), LEMMA_TOL))
        .collect::<nlwe::Result<Vec<_>>>()?;
    println!(
        "Weyl X^a Z^b, d = {d}: all pass {}, worst residual {:.2e}",
        worst.iter().all(|o| o.constraints_hold),
        worst.iter().map(|o| o.isotropy_residual).fold(0.0, f64::max)
    );

    for family in [OperatorFamily::ScaledUnitary, OperatorFamily::Gaussian] {
        let s = survey(d, family, seed, samples, LEMMA_TOL, 1e-8)?;
        println!(
            "{family:?}: {}/{} satisfy the constraints, worst residual among them {:.2e}, violations {}",
            s.constraint_passing, s.samples, s.max_passing_residual, s.violations
        );
    }
    Ok(())
}
