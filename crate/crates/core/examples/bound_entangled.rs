//! Mixed state on the complement of the SHIFT UPB: rank, annihilation of the
//! members, and the partial-transpose spectrum on every bipartition. A Bell
//! state is shown as the entangled contrast.

use nlwe::bound_ent::{be_state, ppt_report, summarize, DensityMatrix};
use nlwe::config::Tolerances;
use nlwe::ensembles::shift_circuit;
use nlwe::linalg::{ComplexVector, DimVector, C64};
use nlwe::upb::extract_upb;

fn main() -> nlwe::Result<()> {
    let tol = Tolerances::default();
    let upb = extract_upb(&shift_circuit(), &[0, 0, 0])?;
    let rho = be_state(&upb, &tol)?;
    let (trace, rank, min_eig, weight) = summarize(&rho, upb.states(), tol.rank_count)?;
    println!("trace {trace:.15}  rank {rank}  min eigenvalue {min_eig:.2e}  max member weight {weight:.2e}");
    print!("{}", ppt_report(&rho, tol.eigen_sign)?);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let bell = ComplexVector::new(vec![C64::new(h, 0.0), z, z, C64::new(h, 0.0)])?;
    let bell = DensityMatrix::pure(&bell, DimVector::new(vec![2, 2])?)?;
    println!("\nBell state:");
    print!("{}", ppt_report(&bell, tol.eigen_sign)?);
    Ok(())
}
