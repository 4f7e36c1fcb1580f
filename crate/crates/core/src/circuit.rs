//! Control-DFT gates and circuits.
//!
//! A gate applies the Fourier transform of its target party's dimension when
//! every control party sits in its required computational-basis state, and
//! acts as the identity otherwise. Circuits of pairwise exclusive gates map
//! computational-basis product states to product states with at most one
//! Fourier factor, which is what [`Circuit::apply_symbolic`] exploits.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{dft_matrix, party_label, ComplexMatrix, ComplexVector, DimVector, C64};
use crate::report::{Check, VerificationReport};
use crate::state::{Factor, ProductBasis, ProductState};

/// Default commutator tolerance.
pub const COMMUTATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ControlDftGate {
    controls: BTreeMap<usize, usize>,
    target: usize,
}

impl ControlDftGate {
    pub fn new(controls: impl IntoIterator<Item = (usize, usize)>, target: usize) -> Self {
        Self {
            controls: controls.into_iter().collect(),
            target,
        }
    }

    pub fn controls(&self) -> &BTreeMap<usize, usize> {
        &self.controls
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn validate(&self, dims: &DimVector) -> Result<()> {
        let n = dims.parties();
        if self.target >= n {
            return Err(Error::Construction(format!(
                "gate target {} outside {} parties",
                self.target, n
            )));
        }
        if self.controls.contains_key(&self.target) {
            return Err(Error::Construction(format!(
                "party {} is both control and target",
                party_label(self.target)
            )));
        }
        for (&p, &v) in &self.controls {
            if p >= n {
                return Err(Error::Construction(format!("control party {p} outside {n} parties")));
            }
            if v >= dims.get(p) {
                return Err(Error::Construction(format!(
                    "control value {v} out of range for party {} of dimension {}",
                    party_label(p),
                    dims.get(p)
                )));
            }
        }
        Ok(())
    }

    /// Whether the control conditions hold on a computational-basis input.
    pub fn fires_on(&self, input: &[usize]) -> bool {
        self.controls.iter().all(|(&p, &v)| input[p] == v)
    }

    /// A party controlled by both gates with different required values.
    pub fn conflict_with(&self, other: &Self) -> Option<(usize, usize, usize)> {
        self.controls.iter().find_map(|(&p, &v)| match other.controls.get(&p) {
            Some(&w) if w != v => Some((p, v, w)),
            _ => None,
        })
    }

    /// Relabels party `p` as `(p + shift) mod n`.
    pub fn shifted(&self, shift: usize, n: usize) -> Self {
        Self {
            controls: self
                .controls
                .iter()
                .map(|(&p, &v)| ((p + shift) % n, v))
                .collect(),
            target: (self.target + shift) % n,
        }
    }

    /// Dense `D×D` matrix of the gate.
    pub fn unitary(&self, dims: &DimVector) -> ComplexMatrix {
        let total = dims.total();
        let dt = dims.get(self.target);
        let f = dft_matrix(dt).expect("validated dimension");
        ComplexMatrix::from_fn(total, total, |r, c| {
            let rd = dims.digits(r);
            let cd = dims.digits(c);
            let same_rest = rd
                .iter()
                .zip(&cd)
                .enumerate()
                .all(|(p, (a, b))| p == self.target || a == b);
            if !same_rest {
                C64::new(0.0, 0.0)
            } else if self.fires_on(&cd) {
                f[(rd[self.target], cd[self.target])]
            } else if rd[self.target] == cd[self.target] {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Applies the gate to a dense state without forming the matrix.
    pub fn apply_to(&self, dims: &DimVector, state: &ComplexVector) -> ComplexVector {
        let dt = dims.get(self.target);
        let stride = dims.stride(self.target);
        let f = dft_matrix(dt).expect("validated dimension");
        let mut out = state.clone();
        let mut block = vec![C64::new(0.0, 0.0); dt];
        for base in 0..dims.total() {
            let digits = dims.digits(base);
            if digits[self.target] != 0 || !self.fires_on(&digits) {
                continue;
            }
            for (k, slot) in block.iter_mut().enumerate() {
                *slot = state[base + k * stride];
            }
            for l in 0..dt {
                out[base + l * stride] = (0..dt).map(|k| f[(l, k)] * block[k]).sum();
            }
        }
        out
    }

    pub fn display(&self, dims: &DimVector) -> String {
        let controls: Vec<String> = self
            .controls
            .iter()
            .map(|(&p, &v)| format!("{}:{v}", party_label(p)))
            .collect();
        format!(
            "{{{}}} -> DFT_{} on {}",
            controls.join(", "),
            dims.get(self.target),
            party_label(self.target)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    dims: DimVector,
    gates: Vec<ControlDftGate>,
}

impl Circuit {
    pub fn new(dims: DimVector, gates: Vec<ControlDftGate>) -> Result<Self> {
        for g in &gates {
            g.validate(&dims)?;
        }
        Ok(Self { dims, gates })
    }

    pub fn empty(dims: DimVector) -> Self {
        Self {
            dims,
            gates: Vec::new(),
        }
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn gates(&self) -> &[ControlDftGate] {
        &self.gates
    }

    /// Same gates in the order `perm` (a permutation of gate indices).
    pub fn reordered(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.gates.len()];
        if perm.len() != self.gates.len() {
            return Err(Error::Malformed("gate permutation has wrong length".into()));
        }
        for &i in perm {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Malformed("not a permutation of the gate list".into()));
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            gates: perm.iter().map(|&i| self.gates[i].clone()).collect(),
        })
    }

    /// One check per unordered gate pair: passes iff some party controls both
    /// gates with different required values.
    pub fn validate_exclusivity(&self) -> VerificationReport {
        let mut report = VerificationReport::new();
        for i in 0..self.gates.len() {
            for j in i + 1..self.gates.len() {
                let name = format!("exclusive(g{},g{})", i + 1, j + 1);
                let check = match self.gates[i].conflict_with(&self.gates[j]) {
                    Some((p, a, b)) => Check::new(name, true)
                        .with_detail(format!("party {} requires {a} vs {b}", party_label(p))),
                    None => Check::new(name, false).with_detail("no conflicting shared control"),
                };
                report.push(check);
            }
        }
        report
    }

    pub fn is_exclusive(&self) -> bool {
        self.validate_exclusivity().passed()
    }

    /// Max-entry commutator residual for every gate pair.
    pub fn check_commutation(&self, tol: f64) -> VerificationReport {
        let mut report = VerificationReport::new();
        let total = self.dims.total();
        for i in 0..self.gates.len() {
            for j in i + 1..self.gates.len() {
                let (a, b) = (&self.gates[i], &self.gates[j]);
                let residual = (0..total)
                    .into_par_iter()
                    .map(|c| {
                        let e = ComplexVector::basis(total, c);
                        let ab = a.apply_to(&self.dims, &b.apply_to(&self.dims, &e));
                        let ba = b.apply_to(&self.dims, &a.apply_to(&self.dims, &e));
                        ab.max_abs_diff(&ba)
                    })
                    .reduce(|| 0.0, f64::max);
                report.push(
                    Check::new(format!("commute(g{},g{})", i + 1, j + 1), residual <= tol)
                        .with_residual(residual),
                );
            }
        }
        report
    }

    fn check_input(&self, input: &[usize]) -> Result<()> {
        if input.len() != self.dims.parties() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.parties(),
                found: input.len(),
            });
        }
        if let Some(p) = (0..input.len()).find(|&p| input[p] >= self.dims.get(p)) {
            return Err(Error::InvalidDimension(format!(
                "input index {} out of range for party {}",
                input[p],
                party_label(p)
            )));
        }
        Ok(())
    }

    /// Output product state for a computational-basis input. Requires an
    /// exclusive circuit, so at most one gate fires.
    pub fn apply_symbolic(&self, input: &[usize]) -> Result<ProductState> {
        self.check_input(input)?;
        if !self.is_exclusive() {
            return Err(Error::ContractViolation(
                "symbolic application needs an exclusive circuit".into(),
            ));
        }
        Ok(self.apply_symbolic_unchecked(input))
    }

    fn apply_symbolic_unchecked(&self, input: &[usize]) -> ProductState {
        let mut factors: Vec<Factor> = input.iter().map(|&i| Factor::Cb(i)).collect();
        if let Some(g) = self.gates.iter().find(|g| g.fires_on(input)) {
            factors[g.target] = Factor::Dft(input[g.target]);
        }
        ProductState::new(factors, self.dims.clone()).expect("input indices checked")
    }

    /// Dense output: gates applied in listed order to the computational-basis ket.
    pub fn apply_dense(&self, input: &[usize]) -> Result<ComplexVector> {
        self.check_input(input)?;
        let mut v = ComplexVector::basis(self.dims.total(), self.dims.index_of(input));
        for g in &self.gates {
            v = g.apply_to(&self.dims, &v);
        }
        Ok(v)
    }

    /// Images of every computational-basis tuple, in lexicographic input order.
    pub fn generate_basis(&self) -> Result<ProductBasis> {
        if !self.is_exclusive() {
            return Err(Error::ContractViolation(
                "basis generation needs an exclusive circuit".into(),
            ));
        }
        let states = (0..self.dims.total())
            .into_par_iter()
            .map(|i| self.apply_symbolic_unchecked(&self.dims.digits(i)))
            .collect();
        ProductBasis::new(self.dims.clone(), states)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit over {} with {} gates", self.dims, self.gates.len())?;
        for (i, g) in self.gates.iter().enumerate() {
            writeln!(f, "  g{}: {}", i + 1, g.display(&self.dims))?;
        }
        Ok(())
    }
}
