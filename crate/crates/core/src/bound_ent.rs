//! Mixed states on the complement of a UPB: construction, PPT checks on
//! every bipartition, and the completion to a product basis across a
//! single-party cut when every party holds a `d`-level system and `n = d + 1`.

use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    gram_deviation, hermitian_eigen, hermitian_eigenvalues, orthogonal_complement_basis, partial_transpose,
    party_label, tensor_all, ComplexMatrix, ComplexVector, DimVector, C64,
};
use crate::report::{Check, VerificationReport};
use crate::state::{Factor, ProductState};
use crate::upb::{is_unextendible, Upb};

/// Hermiticity tolerance for density matrices.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
/// Gram tolerance for separability completions.
pub const COMPLETION_GRAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: DimVector,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity, unit trace and `λ_min ≥ -eigen_sign`.
    pub fn new(matrix: ComplexMatrix, dims: DimVector) -> Result<Self> {
        let rho = Self::new_unchecked_spectrum(matrix, dims)?;
        let min = rho.eigenvalues()?[0];
        if min < -Tolerances::default().eigen_sign {
            return Err(Error::Precondition(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    fn new_unchecked_spectrum(matrix: ComplexMatrix, dims: DimVector) -> Result<Self> {
        if matrix.rows() != dims.total() || matrix.cols() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: matrix.rows(),
            });
        }
        let herm = matrix.hermiticity_residual();
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TRACE_TOL {
            return Err(Error::Precondition(format!("trace {tr} is not 1")));
        }
        Ok(Self { matrix, dims })
    }

    /// Projector onto a normalized pure state.
    pub fn pure(state: &ComplexVector, dims: DimVector) -> Result<Self> {
        Self::new(ComplexMatrix::outer(state), dims)
    }

    pub fn maximally_mixed(dims: DimVector) -> Self {
        let d = dims.total();
        Self {
            matrix: ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        Ok(self.eigenvalues()?.iter().filter(|&&l| l > threshold).count())
    }

    /// `⟨ψ|ρ|ψ⟩` (real part).
    pub fn expectation(&self, psi: &ComplexVector) -> Result<f64> {
        Ok(psi.inner(&self.matrix.mul_vec(psi)?).re)
    }

    pub fn partial_transpose(&self, subset: &[usize]) -> Result<ComplexMatrix> {
        partial_transpose(&self.matrix, &self.dims, subset)
    }
}

/// Uniform mixture on the orthogonal complement of the members,
/// `(1 - Σ|ψ_i⟩⟨ψ_i|) / (D - m)`, without any unextendibility requirement.
pub fn complement_mixture(states: &[ProductState], dims: &DimVector) -> Result<DensityMatrix> {
    let total = dims.total();
    let m = states.len();
    if m >= total {
        return Err(Error::Precondition(format!("{m} states leave no complement in dimension {total}")));
    }
    let mut acc = ComplexMatrix::identity(total);
    for s in states {
        acc = acc.sub(&ComplexMatrix::outer(&s.render()))?;
    }
    let rho = acc.scale(C64::new(1.0 / (total - m) as f64, 0.0));
    DensityMatrix::new_unchecked_spectrum(rho, dims.clone())
}

/// Bound-entangled state on the complement of an unextendible product basis.
/// Fails with a contract error when the set is extendible, since the
/// entanglement certificate rests on the complement being product-free.
pub fn be_state(upb: &Upb, tol: &Tolerances) -> Result<DensityMatrix> {
    let report = is_unextendible(upb, tol.rank)?;
    if !report.passed() {
        let detail = report.get("unextendible").map(|c| c.detail.clone()).unwrap_or_default();
        return Err(Error::ContractViolation(format!(
            "input set is extendible, so its complement contains a product state ({detail})"
        )));
    }
    complement_mixture(upb.states(), upb.dims())
}

/// All bipartitions as the side containing party 0 (proper subsets only).
pub fn bipartitions(parties: usize) -> Vec<Vec<usize>> {
    (0..(1usize << (parties - 1)))
        .map(|mask| {
            std::iter::once(0)
                .chain((1..parties).filter(|p| mask & (1 << (p - 1)) != 0))
                .collect::<Vec<_>>()
        })
        .filter(|s| s.len() < parties)
        .collect()
}

pub fn cut_label(subset: &[usize], parties: usize) -> String {
    let left: String = subset.iter().map(|&p| party_label(p)).collect();
    let right: String = (0..parties)
        .filter(|p| !subset.contains(p))
        .map(party_label)
        .collect();
    format!("{left}|{right}")
}

/// Minimum partial-transpose eigenvalue on each of the `2^{n-1} - 1` cuts;
/// a cut passes when that minimum is at least `-tol`.
pub fn ppt_report(rho: &DensityMatrix, tol: f64) -> Result<VerificationReport> {
    let n = rho.dims().parties();
    if n < 2 {
        return Err(Error::DegenerateCut);
    }
    let cuts = bipartitions(n);
    let results: Vec<Result<Check>> = cuts
        .par_iter()
        .map(|subset| {
            let pt = rho.partial_transpose(subset)?;
            let trace_err = (pt.trace() - C64::new(1.0, 0.0)).norm();
            let min = hermitian_eigenvalues(&pt)?[0];
            Ok(Check::new(format!("ppt[{}]", cut_label(subset, n)), min >= -tol)
                .with_residual(min)
                .with_detail(format!("min PT eigenvalue; trace error {trace_err:.1e}")))
        })
        .collect();
    let mut report = VerificationReport::new();
    for r in results {
        report.push(r?);
    }
    Ok(report)
}

/// Product state across the cut `party | rest`, the rest ordered by
/// ascending party index.
#[derive(Debug, Clone, PartialEq)]
pub struct CutProductState {
    pub party: usize,
    pub local: ComplexVector,
    pub rest: ComplexVector,
}

impl CutProductState {
    /// Dense ket in the full tensor ordering.
    pub fn to_dense(&self, dims: &DimVector) -> ComplexVector {
        let rest_dims = DimVector::new(dims.without(self.party)).expect("at least two parties");
        let mut out = ComplexVector::zeros(dims.total());
        for i in 0..dims.total() {
            let mut digits = dims.digits(i);
            let l = digits.remove(self.party);
            out[i] = self.local[l] * self.rest[rest_dims.index_of(&digits)];
        }
        out
    }

    pub fn from_product(state: &ProductState, party: usize) -> Self {
        let locals = state.local_vectors();
        let rest: Vec<ComplexVector> = locals
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != party)
            .map(|(_, v)| v.clone())
            .collect();
        Self {
            party,
            local: locals[party].clone(),
            rest: tensor_all(&rest),
        }
    }
}

/// Completion of a UPB to a full orthonormal product basis across one cut.
#[derive(Debug, Clone)]
pub struct SeparabilityCompletion {
    pub party: usize,
    /// The UPB members first, in order, then the added states.
    pub states: Vec<CutProductState>,
    pub original: usize,
    /// Dimension of the complement of `span(f, g)` in the rest space.
    pub s_prime_dim: usize,
    /// Largest overlap of a non-`f`/`g` rest factor with `span(f, g)`.
    pub s_prime_leak: f64,
}

impl SeparabilityCompletion {
    pub fn dense(&self, dims: &DimVector) -> Vec<ComplexVector> {
        self.states.iter().map(|s| s.to_dense(dims)).collect()
    }
}

fn saturated_degree(dims: &DimVector) -> Result<usize> {
    let d = dims.get(0);
    let n = dims.parties();
    if d < 2 || n != d + 1 || dims.as_slice().iter().any(|&x| x != d) {
        return Err(Error::UnsupportedShape(format!(
            "completion needs n = d + 1 parties of equal dimension d, got {dims}"
        )));
    }
    Ok(d)
}

/// Builds the completion across `singled_party | rest`.
///
/// Members are regrouped as `|local⟩⊗|rest⟩`: the `d` families whose local
/// factor is `|c⟩`, the family with a Fourier local factor sharing rest `f`,
/// and the stopper with rest `g`. Within `S' = span(f, g)^⊥` each `|c⟩`
/// family is completed by `d^d - d - 1` vectors; inside `S = span(f, g)`,
/// `f^⊥` pairs with every non-excluded Fourier local factor and `g^⊥` with
/// the stopper's.
pub fn separability_completion(upb: &Upb, singled_party: usize, tol: f64) -> Result<SeparabilityCompletion> {
    let dims = upb.dims();
    let d = saturated_degree(dims)?;
    if singled_party >= dims.parties() {
        return Err(Error::InvalidDimension(format!("party {singled_party} out of range")));
    }
    let rest_dim = d.pow(d as u32);
    let split: Vec<CutProductState> = upb
        .states()
        .iter()
        .map(|s| CutProductState::from_product(s, singled_party))
        .collect();
    let stopper = &upb.states()[upb.stopper_index()];
    let Factor::Dft(excluded) = *stopper.factor(singled_party) else {
        return Err(Error::UnsupportedShape("stopper local factor is not a Fourier ket".into()));
    };

    let mut f_family = Vec::new();
    let mut cb_families: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (i, s) in upb.states().iter().enumerate() {
        if i == upb.stopper_index() {
            continue;
        }
        match s.factor(singled_party) {
            Factor::Cb(c) => cb_families[*c].push(i),
            Factor::Dft(_) => f_family.push(i),
            Factor::Dense(_) => {
                return Err(Error::UnsupportedShape("dense factors are not supported".into()));
            }
        }
    }
    if f_family.len() != d - 1 || cb_families.iter().any(|f| f.len() != d - 1) {
        return Err(Error::UnsupportedShape(format!(
            "expected {d} computational families and one Fourier family of {} members each",
            d - 1
        )));
    }
    let f = split[f_family[0]].rest.clone();
    if f_family.iter().any(|&i| split[i].rest.max_abs_diff(&f) > tol) {
        return Err(Error::UnsupportedShape("Fourier family does not share one rest factor".into()));
    }
    let g = split[upb.stopper_index()].rest.clone();

    let fg = [f.clone(), g.clone()];
    let s_prime = orthogonal_complement_basis(&fg, rest_dim, tol)?;
    let s_prime_leak = cb_families
        .iter()
        .flatten()
        .map(|&i| f.inner(&split[i].rest).norm().max(g.inner(&split[i].rest).norm()))
        .fold(0.0, f64::max);

    let mut states = split.clone();
    for (c, family) in cb_families.iter().enumerate() {
        let mut seeds = fg.to_vec();
        seeds.extend(family.iter().map(|&i| split[i].rest.clone()));
        let local = ComplexVector::basis(d, c);
        for v in orthogonal_complement_basis(&seeds, rest_dim, tol)? {
            states.push(CutProductState {
                party: singled_party,
                local: local.clone(),
                rest: v,
            });
        }
    }

    let perp_within_s = |keep: &ComplexVector, remove: &ComplexVector| -> Result<ComplexVector> {
        let mut v = keep.clone();
        let c = remove.inner(&v) / remove.inner(remove);
        v.sub_scaled(c, remove);
        v.normalized()
            .map(|v| v.fix_phase(1e-12))
            .ok_or_else(|| Error::UnsupportedShape("f and g are parallel".into()))
    };
    let f_perp = perp_within_s(&g, &f)?;
    let g_perp = perp_within_s(&f, &g)?;
    for k in (0..d).filter(|&k| k != excluded) {
        states.push(CutProductState {
            party: singled_party,
            local: ComplexVector::fourier(d, k),
            rest: f_perp.clone(),
        });
    }
    states.push(CutProductState {
        party: singled_party,
        local: ComplexVector::fourier(d, excluded),
        rest: g_perp,
    });

    Ok(SeparabilityCompletion {
        party: singled_party,
        states,
        original: upb.len(),
        s_prime_dim: s_prime.len(),
        s_prime_leak,
    })
}

/// Runs [`separability_completion`] for every single-party cut.
pub fn separability_report(upb: &Upb, tol: f64) -> Result<VerificationReport> {
    let dims = upb.dims();
    let d = saturated_degree(dims)?;
    let n = dims.parties();
    let full = d.pow(n as u32);
    let mut report = VerificationReport::new();
    for party in 0..n {
        let completion = separability_completion(upb, party, tol)?;
        let dense = completion.dense(dims);
        let dev = gram_deviation(&dense)?;
        let originals_match = upb
            .states()
            .iter()
            .zip(&dense)
            .map(|(s, v)| s.render().max_abs_diff(v))
            .fold(0.0, f64::max);
        let count_ok = dense.len() == full;
        let ok = count_ok
            && dev <= COMPLETION_GRAM_TOL
            && originals_match <= 1e-10
            && completion.s_prime_dim == d.pow(d as u32) - 2
            && completion.s_prime_leak <= tol;
        let rest: String = (0..n).filter(|&p| p != party).map(party_label).collect();
        report.push(
            Check::new(format!("completion[{}|{}]", party_label(party), rest), ok)
                .with_residual(dev)
                .with_detail(format!(
                    "{} of {full} states, dim S' = {}, Gram deviation shown",
                    dense.len(),
                    completion.s_prime_dim
                )),
        );
    }
    Ok(report)
}

/// Eigen-decomposition helper used by the command-line summary: returns
/// (trace, rank, min eigenvalue, max UPB-member expectation).
pub fn summarize(rho: &DensityMatrix, members: &[ProductState], rank_threshold: f64) -> Result<(f64, usize, f64, f64)> {
    let eig = hermitian_eigen(rho.matrix())?;
    let rank = eig.values.iter().filter(|&&l| l > rank_threshold).count();
    let annihilation = members
        .iter()
        .map(|s| rho.expectation(&s.render()).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((rho.trace().re, rank, eig.values[0], annihilation))
}
