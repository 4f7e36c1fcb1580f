//! Single-outcome measurement constraint: an operator that keeps both the
//! computational basis and the Fourier basis orthogonal must be proportional
//! to an isometry, so the outcome carries no information about the state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dft_matrix, ComplexMatrix, ComplexVector, C64};

pub const LEMMA_TOL: f64 = 1e-9;

/// One measurement branch acting on a `d`-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausOperator {
    matrix: ComplexMatrix,
}

impl KrausOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDimension(format!(
                "Kraus operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
        }
    }
}

/// Whether `K` keeps every pair of distinct basis vectors orthogonal.
///
/// The overlap is measured as `|⟨Kb_m|Kb_n⟩| / (‖Kb_m‖‖Kb_n‖)`; a pair whose
/// image has norm at most `tol·‖K‖_F` passes outright (a vanishing branch
/// amplitude satisfies the constraint).
pub fn preserves_orthogonality(k: &KrausOperator, basis: &[ComplexVector], tol: f64) -> Result<bool> {
    let scale = k.matrix.frobenius_norm();
    if scale == 0.0 {
        return Ok(true);
    }
    let images: Vec<ComplexVector> = basis.iter().map(|b| k.matrix.mul_vec(b)).collect::<Result<_>>()?;
    let norms: Vec<f64> = images.iter().map(ComplexVector::norm).collect();
    for m in 0..images.len() {
        for n in m + 1..images.len() {
            if norms[m] <= tol * scale || norms[n] <= tol * scale {
                continue;
            }
            if images[m].inner(&images[n]).norm() > tol * norms[m] * norms[n] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn computational_basis(d: usize) -> Vec<ComplexVector> {
    (0..d).map(|i| ComplexVector::basis(d, i)).collect()
}

/// Columns of [`dft_matrix`].
pub fn fourier_basis(d: usize) -> Result<Vec<ComplexVector>> {
    let f = dft_matrix(d)?;
    Ok((0..d).map(|n| f.column(n)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaOutcome {
    pub constraints_hold: bool,
    /// `max |K^H K - c·1|` with `c = tr(K^H K)/d`.
    pub isotropy_residual: f64,
}

pub fn lemma_check(k: &KrausOperator, tol: f64) -> Result<LemmaOutcome> {
    let d = k.dim();
    let constraints_hold = preserves_orthogonality(k, &computational_basis(d), tol)?
        && preserves_orthogonality(k, &fourier_basis(d)?, tol)?;
    let kk = k.matrix.adjoint().matmul(&k.matrix)?;
    let c = kk.trace() / d as f64;
    let isotropy_residual = kk.sub(&ComplexMatrix::identity(d).scale(c))?.max_abs();
    Ok(LemmaOutcome {
        constraints_hold,
        isotropy_residual,
    })
}

/// Generalized Weyl operator `X^a Z^b` (`X` cyclic shift, `Z` clock).
pub fn weyl_operator(d: usize, a: usize, b: usize) -> KrausOperator {
    let omega = |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((b * k) % d) as f64 / d as f64);
    let matrix = ComplexMatrix::from_fn(d, d, |r, c| {
        if r == (c + a) % d {
            omega(c)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    KrausOperator { matrix }
}

fn gaussian_matrix(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let data = (0..d * d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(d, d, data).expect("d*d entries")
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian_operator(d: usize, rng: &mut ChaCha8Rng) -> KrausOperator {
    KrausOperator {
        matrix: gaussian_matrix(d, rng),
    }
}

/// Unitary from Gram-Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> KrausOperator {
    let g = gaussian_matrix(d, rng);
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(d);
    for c in 0..d {
        let mut v = g.column(c);
        for _ in 0..2 {
            for q in &cols {
                let s = q.inner(&v);
                v.sub_scaled(s, q);
            }
        }
        cols.push(v.normalized().expect("Gaussian columns are independent almost surely"));
    }
    KrausOperator {
        matrix: ComplexMatrix::from_columns(&cols).expect("square"),
    }
}

/// Independent stream per sample index, so batches are reproducible in any order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorFamily {
    Gaussian,
    ScaledUnitary,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveySummary {
    pub dim: usize,
    pub family: OperatorFamily,
    pub samples: usize,
    pub constraint_passing: usize,
    /// Largest isotropy residual among constraint-passing samples.
    pub max_passing_residual: f64,
    /// Passing samples whose residual exceeds the bound.
    pub violations: usize,
}

/// Runs `samples` seeded draws of the family through [`lemma_check`].
pub fn survey(
    d: usize,
    family: OperatorFamily,
    seed: u64,
    samples: usize,
    tol: f64,
    residual_bound: f64,
) -> Result<SurveySummary> {
    let outcomes: Vec<LemmaOutcome> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let k = match family {
                OperatorFamily::Gaussian => random_gaussian_operator(d, &mut rng),
                OperatorFamily::ScaledUnitary => {
                    let u = random_unitary(d, &mut rng);
                    let s: f64 = StandardNormal.sample(&mut rng);
                    let t: f64 = StandardNormal.sample(&mut rng);
                    u.scaled(C64::new(s, t))
                }
            };
            lemma_check(&k, tol)
        })
        .collect::<Result<_>>()?;
    let passing: Vec<&LemmaOutcome> = outcomes.iter().filter(|o| o.constraints_hold).collect();
    Ok(SurveySummary {
        dim: d,
        family,
        samples,
        constraint_passing: passing.len(),
        max_passing_residual: passing.iter().map(|o| o.isotropy_residual).fold(0.0, f64::max),
        violations: passing.iter().filter(|o| o.isotropy_residual > residual_bound).count(),
    })
}
