//! Unextendible product bases extracted from cyclic circuits, and the
//! exhaustive extendibility search.
//!
//! A set of product states `{ψ_i}` is extendible iff its members can be
//! split among the parties so that, for every party `j`, the local factors
//! of the members assigned to `j` fail to span `C^{d_j}`. A vector outside
//! each party's span then gives a product state orthogonal to the whole set.

use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::ensembles::canonical_circuit;
use crate::error::{Error, Result};
use crate::linalg::{gram, orthogonal_complement_basis, party_label, ComplexMatrix, ComplexVector, DimVector, SpanBasis};
use crate::report::{Check, VerificationReport};
use crate::state::{Factor, ProductState};

/// Off-diagonal Gram tolerance for members of a UPB.
pub const UPB_ORTHOGONALITY_TOL: f64 = 1e-10;

/// Smallest possible UPB size, `Σ (d_i - 1) + 1`.
pub fn minimal_size(dims: &DimVector) -> usize {
    dims.as_slice().iter().map(|d| d - 1).sum::<usize>() + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct Upb {
    states: Vec<ProductState>,
    dims: DimVector,
    stopper_index: usize,
}

impl Upb {
    /// Checks shape, mutual orthogonality and `minimal_size ≤ m < D`.
    pub fn new(states: Vec<ProductState>, dims: DimVector, stopper_index: usize) -> Result<Self> {
        if stopper_index >= states.len() {
            return Err(Error::Malformed(format!(
                "stopper index {stopper_index} out of range for {} states",
                states.len()
            )));
        }
        if let Some(s) = states.iter().find(|s| s.dims() != &dims) {
            return Err(Error::Malformed(format!(
                "member dimensions {} differ from {}",
                s.dims(),
                dims
            )));
        }
        let m = states.len();
        if m < minimal_size(&dims) {
            return Err(Error::Precondition(format!(
                "{m} states is below the minimal UPB size {}",
                minimal_size(&dims)
            )));
        }
        if m >= dims.total() {
            return Err(Error::Precondition(format!(
                "{m} states fill the whole {}-dimensional space",
                dims.total()
            )));
        }
        let upb = Self {
            states,
            dims,
            stopper_index,
        };
        let off = upb.orthogonality_residual();
        if off > UPB_ORTHOGONALITY_TOL {
            return Err(Error::Precondition(format!(
                "members are not mutually orthogonal (max overlap {off:e})"
            )));
        }
        Ok(upb)
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn stopper_index(&self) -> usize {
        self.stopper_index
    }

    pub fn stopper(&self) -> &ProductState {
        &self.states[self.stopper_index]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn render(&self) -> Vec<ComplexVector> {
        self.states.iter().map(ProductState::render).collect()
    }

    /// Largest off-diagonal modulus of the dense Gram matrix.
    pub fn orthogonality_residual(&self) -> f64 {
        let g = gram(&self.render()).expect("members share dimensions");
        off_diagonal_max(&g)
    }

    /// Members with position `index` removed.
    pub fn without(&self, index: usize) -> Vec<ProductState> {
        self.states
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, s)| s.clone())
            .collect()
    }
}

fn off_diagonal_max(g: &ComplexMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for r in 0..g.rows() {
        for c in 0..g.cols() {
            if r != c {
                worst = worst.max(g[(r, c)].norm());
            }
        }
    }
    worst
}

/// Per-party excluded Fourier index from text such as `all=0`, `C=1`,
/// or `0=2,3=1`. Unlisted parties keep their entry in `defaults`.
pub fn parse_excluded(text: &str, dims: &DimVector, defaults: &[usize]) -> Result<Vec<usize>> {
    let mut out = defaults.to_vec();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Malformed(format!("excluded-index item '{item}' lacks '='")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("excluded-index value '{value}' is not an integer")))?;
        let key = key.trim();
        let parties: Vec<usize> = if key.eq_ignore_ascii_case("all") {
            (0..dims.parties()).collect()
        } else if let Ok(p) = key.parse::<usize>() {
            vec![p]
        } else if key.len() == 1 && key.chars().all(|c| c.is_ascii_alphabetic()) {
            vec![(key.to_ascii_uppercase().as_bytes()[0] - b'A') as usize]
        } else {
            return Err(Error::Malformed(format!("unknown party '{key}'")));
        };
        for p in parties {
            if p >= dims.parties() {
                return Err(Error::Malformed(format!("party index {p} out of range")));
            }
            out[p] = value;
        }
    }
    Ok(out)
}

/// Selects, for every gate, the `d_j - 1` images whose target factor is
/// `F|k⟩` with `k ≠ excluded[j]` (controls at the gate's values), then
/// appends the stopper `⊗_j F|excluded[j]⟩`.
pub fn extract_upb(circuit: &Circuit, excluded: &[usize]) -> Result<Upb> {
    let dims = circuit.dims();
    let n = dims.parties();
    let canonical = canonical_circuit(n, dims)
        .map_err(|e| Error::ContractViolation(format!("UPB extraction needs a canonical circuit: {e}")))?;
    let mut expected: Vec<_> = canonical.gates().to_vec();
    let mut actual: Vec<_> = circuit.gates().to_vec();
    let key = |g: &crate::circuit::ControlDftGate| (g.target(), g.controls().clone());
    expected.sort_by_key(key);
    actual.sort_by_key(key);
    if expected != actual {
        return Err(Error::ContractViolation(
            "UPB extraction needs the canonical cyclic circuit".into(),
        ));
    }
    if excluded.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: excluded.len(),
        });
    }
    if let Some(p) = (0..n).find(|&p| excluded[p] >= dims.get(p)) {
        return Err(Error::InvalidDimension(format!(
            "excluded index {} out of range for party {}",
            excluded[p],
            party_label(p)
        )));
    }

    let mut states = Vec::with_capacity(minimal_size(dims));
    for gate in circuit.gates() {
        let t = gate.target();
        let mut input = vec![0; n];
        for (&p, &v) in gate.controls() {
            input[p] = v;
        }
        for k in (0..dims.get(t)).filter(|&k| k != excluded[t]) {
            input[t] = k;
            states.push(circuit.apply_symbolic(&input)?);
        }
    }
    let stopper = ProductState::new(excluded.iter().map(|&k| Factor::Dft(k)).collect(), dims.clone())?;
    states.push(stopper);
    let stopper_index = states.len() - 1;
    Upb::new(states, dims.clone(), stopper_index)
}

/// Outcome of the assignment search.
#[derive(Debug, Clone)]
pub struct ExtensionSearch {
    pub extendible: bool,
    /// Member-to-party placements tried, pruned ones included.
    pub assignments_examined: u64,
    /// `n^m`, the number of complete assignments without pruning.
    pub assignment_bound: u128,
    /// Party chosen for each member in the first successful assignment.
    pub witness_assignment: Option<Vec<usize>>,
    /// Product state orthogonal to every member.
    pub witness: Option<ProductState>,
}

/// Depth-first search over member-to-party assignments (members in listed
/// order, parties ascending). A branch survives only while every party's
/// assigned factors span less than its full space, so the first complete
/// assignment reached is the lexicographically least witness.
pub fn search_extension(states: &[ProductState], dims: &DimVector, tol: f64) -> Result<ExtensionSearch> {
    if let Some(s) = states.iter().find(|s| s.dims() != dims) {
        return Err(Error::Malformed(format!("member dimensions {} differ from {}", s.dims(), dims)));
    }
    let n = dims.parties();
    let m = states.len();
    // Local factors are densified once per (member, party).
    let local: Vec<Vec<ComplexVector>> = states.iter().map(ProductState::local_vectors).collect();
    let mut spans: Vec<SpanBasis> = (0..n).map(|p| SpanBasis::new(dims.get(p), tol)).collect();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut assignment = vec![0usize; m];
    let mut examined = 0u64;

    fn recurse(
        i: usize,
        local: &[Vec<ComplexVector>],
        spans: &mut [SpanBasis],
        groups: &mut [Vec<usize>],
        assignment: &mut [usize],
        examined: &mut u64,
    ) -> bool {
        if i == local.len() {
            return true;
        }
        for p in 0..spans.len() {
            *examined += 1;
            let grew = spans[p].insert(&local[i][p]);
            if spans[p].rank() < spans[p].ambient_dim() {
                assignment[i] = p;
                groups[p].push(i);
                if recurse(i + 1, local, spans, groups, assignment, examined) {
                    return true;
                }
                groups[p].pop();
            }
            if grew {
                spans[p].pop();
            }
        }
        false
    }

    let extendible = recurse(0, &local, &mut spans, &mut groups, &mut assignment, &mut examined);
    let assignment_bound = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);

    let (witness_assignment, witness) = if extendible {
        let mut factors = Vec::with_capacity(n);
        for p in 0..n {
            let members: Vec<ComplexVector> = groups[p].iter().map(|&i| local[i][p].clone()).collect();
            let comp = orthogonal_complement_basis(&members, dims.get(p), tol)?;
            let v = comp
                .into_iter()
                .next()
                .ok_or_else(|| Error::ContractViolation("assigned span unexpectedly full".into()))?;
            factors.push(Factor::Dense(v));
        }
        (Some(assignment), Some(ProductState::new(factors, dims.clone())?))
    } else {
        (None, None)
    };

    Ok(ExtensionSearch {
        extendible,
        assignments_examined: examined,
        assignment_bound,
        witness_assignment,
        witness,
    })
}

/// Report for an arbitrary incomplete set of product states.
pub fn extendibility_report(states: &[ProductState], dims: &DimVector, tol: f64) -> Result<VerificationReport> {
    if states.len() >= dims.total() {
        return Err(Error::Precondition(format!(
            "{} states is not an incomplete set in dimension {}",
            states.len(),
            dims.total()
        )));
    }
    let search = search_extension(states, dims, tol)?;
    let mut report = VerificationReport::new();
    let detail = format!(
        "{} assignments examined (pre-pruning bound {})",
        search.assignments_examined, search.assignment_bound
    );
    match (&search.witness_assignment, &search.witness) {
        (Some(assignment), Some(witness)) => {
            let labels: Vec<String> = assignment.iter().map(|&p| party_label(p)).collect();
            report.push(
                Check::new("unextendible", false)
                    .with_detail(format!("extendible; {detail}; assignment [{}]", labels.join(","))),
            );
            let w = witness.render();
            let worst = states
                .iter()
                .map(|s| s.render().inner(&w).norm())
                .fold(0.0, f64::max);
            report.push(
                Check::new("witness-orthogonal", worst <= 1e-9)
                    .with_residual(worst)
                    .with_detail("max overlap of the witness with any member"),
            );
        }
        _ => report.push(Check::new("unextendible", true).with_detail(format!("unextendible; {detail}"))),
    }
    Ok(report)
}

pub fn is_unextendible(upb: &Upb, tol: f64) -> Result<VerificationReport> {
    extendibility_report(upb.states(), upb.dims(), tol)
}

/// Members grouped by which gate produced them, keyed by target party; the
/// stopper is excluded.
pub fn families(upb: &Upb) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in upb.states().iter().enumerate() {
        if i == upb.stopper_index() {
            continue;
        }
        if let Some(t) = s.factors().iter().position(Factor::is_dft) {
            out.entry(t).or_default().push(i);
        }
    }
    out
}
