//! Product states with symbolic local factors.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{gram_deviation, C64, party_label, tensor_all, ComplexVector, DimVector};

/// Normalization required of dense local factors.
pub const DENSE_FACTOR_TOL: f64 = 1e-12;

/// One party's share of a product state.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// Computational-basis ket `|i⟩`.
    Cb(usize),
    /// Fourier-basis ket `F|i⟩`.
    Dft(usize),
    Dense(ComplexVector),
}

/// Symbol-level description of a factor, used for census tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorDescriptor {
    Cb(usize),
    Dft(usize),
    Dense,
}

impl Factor {
    pub fn to_vector(&self, dim: usize) -> ComplexVector {
        match self {
            Factor::Cb(i) => ComplexVector::basis(dim, *i),
            Factor::Dft(i) => ComplexVector::fourier(dim, *i),
            Factor::Dense(v) => v.clone(),
        }
    }

    pub fn descriptor(&self) -> FactorDescriptor {
        match self {
            Factor::Cb(i) => FactorDescriptor::Cb(*i),
            Factor::Dft(i) => FactorDescriptor::Dft(*i),
            Factor::Dense(_) => FactorDescriptor::Dense,
        }
    }

    pub fn is_dft(&self) -> bool {
        matches!(self, Factor::Dft(_))
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Factor::Cb(i) | Factor::Dft(i) if *i >= dim => Err(Error::InvalidDimension(format!(
                "factor index {i} out of range for local dimension {dim}"
            ))),
            Factor::Dense(v) if v.dim() != dim => Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            }),
            Factor::Dense(v) if !v.is_normalized(DENSE_FACTOR_TOL) => Err(Error::Malformed(format!(
                "dense factor has norm {}",
                v.norm()
            ))),
            _ => Ok(()),
        }
    }

    /// Ket label; qubit Fourier kets print as `0+1` / `0-1`.
    pub fn label(&self, dim: usize) -> String {
        match self {
            Factor::Cb(i) => i.to_string(),
            Factor::Dft(0) if dim == 2 => "0+1".into(),
            Factor::Dft(1) if dim == 2 => "0-1".into(),
            Factor::Dft(i) => format!("F{i}"),
            Factor::Dense(v) => {
                let parts: Vec<String> = v.entries().iter().map(|&z| fmt_amplitude(z)).collect();
                format!("({})", parts.join(", "))
            }
        }
    }
}

fn fmt_amplitude(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-4 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.3}"),
        (true, false) => format!("{im:.3}i"),
        (false, false) => format!("{re:.3}{im:+.3}i"),
    }
}

impl fmt::Display for FactorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorDescriptor::Cb(i) => write!(f, "CB{i}"),
            FactorDescriptor::Dft(i) => write!(f, "DFT{i}"),
            FactorDescriptor::Dense => write!(f, "dense"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<Factor>,
    dims: DimVector,
}

impl ProductState {
    pub fn new(factors: Vec<Factor>, dims: DimVector) -> Result<Self> {
        if factors.len() != dims.parties() {
            return Err(Error::DimensionMismatch {
                expected: dims.parties(),
                found: factors.len(),
            });
        }
        for (p, f) in factors.iter().enumerate() {
            f.validate(dims.get(p))?;
        }
        Ok(Self { factors, dims })
    }

    /// Computational-basis product state `|i_1,…,i_n⟩`.
    pub fn computational(indices: &[usize], dims: &DimVector) -> Result<Self> {
        Self::new(indices.iter().map(|&i| Factor::Cb(i)).collect(), dims.clone())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, party: usize) -> &Factor {
        &self.factors[party]
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn local_vector(&self, party: usize) -> ComplexVector {
        self.factors[party].to_vector(self.dims.get(party))
    }

    pub fn local_vectors(&self) -> Vec<ComplexVector> {
        (0..self.dims.parties()).map(|p| self.local_vector(p)).collect()
    }

    /// Dense ket in the full space.
    pub fn render(&self) -> ComplexVector {
        tensor_all(&self.local_vectors())
    }

    pub fn dft_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_dft()).count()
    }

    /// `⟨self|other⟩` computed factor by factor.
    pub fn overlap(&self, other: &Self) -> num_complex::Complex64 {
        (0..self.dims.parties())
            .map(|p| self.local_vector(p).inner(&other.local_vector(p)))
            .product()
    }

    /// Reorders parties: party `k` of the result is party `perm[k]` of `self`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            perm.iter().map(|&p| self.factors[p].clone()).collect(),
            self.dims.permuted(perm)?,
        )
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, factor) in self.factors.iter().enumerate() {
            write!(f, "|{}⟩", factor.label(self.dims.get(p)))?;
        }
        Ok(())
    }
}

/// Ordered list of mutually orthogonal product states over shared dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBasis {
    dims: DimVector,
    states: Vec<ProductState>,
}

impl ProductBasis {
    pub fn new(dims: DimVector, states: Vec<ProductState>) -> Result<Self> {
        if let Some(s) = states.iter().find(|s| s.dims() != &dims) {
            return Err(Error::Malformed(format!(
                "state dimensions {} differ from basis dimensions {}",
                s.dims(),
                dims
            )));
        }
        Ok(Self { dims, states })
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn render(&self) -> Vec<ComplexVector> {
        use rayon::prelude::*;
        self.states.par_iter().map(ProductState::render).collect()
    }

    /// `max |G - 1|` of the dense Gram matrix.
    pub fn gram_deviation(&self) -> Result<f64> {
        gram_deviation(&self.render())
    }

    /// Total number of Fourier factors over all states.
    pub fn dft_factor_count(&self) -> usize {
        self.states.iter().map(ProductState::dft_count).sum()
    }

    /// Number of states carrying at least one Fourier factor.
    pub fn states_with_dft(&self) -> usize {
        self.states.iter().filter(|s| s.dft_count() > 0).count()
    }
}

impl fmt::Display for ProductBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.dims.parties()).map(party_label).collect();
        writeln!(f, "{} states over {} ({})", self.len(), self.dims, labels.join(""))?;
        for (i, s) in self.states.iter().enumerate() {
            writeln!(f, "  {:>4}: {}", i + 1, s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_matches_manual_tensor() {
        let dims = DimVector::new(vec![2, 2]).unwrap();
        let s = ProductState::new(vec![Factor::Dft(0), Factor::Cb(0)], dims).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let expected = ComplexVector::from_real(&[h, 0.0, h, 0.0]).unwrap();
        assert!(s.render().max_abs_diff(&expected) < 1e-15);
        assert_eq!(s.to_string(), "|0+1⟩|0⟩");
    }

    #[test]
    fn out_of_range_factor_rejected() {
        let dims = DimVector::new(vec![2, 3]).unwrap();
        assert!(ProductState::new(vec![Factor::Cb(2), Factor::Cb(0)], dims.clone()).is_err());
        assert!(ProductState::new(vec![Factor::Cb(1)], dims.clone()).is_err());
        let unnormalized = ComplexVector::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert!(ProductState::new(vec![Factor::Cb(0), Factor::Dense(unnormalized)], dims).is_err());
    }

    #[test]
    fn overlap_agrees_with_dense_inner_product() {
        let dims = DimVector::new(vec![3, 2]).unwrap();
        let a = ProductState::new(vec![Factor::Dft(1), Factor::Cb(1)], dims.clone()).unwrap();
        let b = ProductState::new(vec![Factor::Cb(2), Factor::Dft(1)], dims).unwrap();
        let dense = a.render().inner(&b.render());
        assert!((a.overlap(&b) - dense).norm() < 1e-15);
    }
}
