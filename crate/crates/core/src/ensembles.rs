//! Preset circuits and the generic cyclic construction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, ControlDftGate};
use crate::error::{Error, Result};
use crate::linalg::{party_label, DimVector};
use crate::state::{FactorDescriptor, ProductBasis};

/// Control pattern of the first cyclic gate: parties `0..n-1` hold `0..n-2`,
/// target is the last party.
fn base_gate(n: usize) -> ControlDftGate {
    ControlDftGate::new((0..n - 1).map(|j| (j, j)), n - 1)
}

/// `n` cyclically shifted control-DFT gates. Gate `k` targets party
/// `(k - 1) mod n` and requires party `(k + j) mod n` to hold `|j⟩`.
pub fn canonical_circuit(n: usize, dims: &DimVector) -> Result<Circuit> {
    if n < 3 {
        return Err(Error::Construction(format!("need at least 3 parties, got {n}")));
    }
    if dims.parties() != n {
        return Err(Error::Construction(format!(
            "{} dimensions given for {n} parties",
            dims.parties()
        )));
    }
    if let Some(p) = (0..n).find(|&p| dims.get(p) < n - 1) {
        return Err(Error::Construction(format!(
            "party {} has dimension {} < n - 1 = {}",
            party_label(p),
            dims.get(p),
            n - 1
        )));
    }
    let base = base_gate(n);
    let gates = (0..n).map(|k| base.shifted(k, n)).collect();
    Circuit::new(dims.clone(), gates)
}

/// Two qubits, one control-Hadamard on B conditioned on A in `|1⟩`.
pub fn oneway_circuit() -> Circuit {
    let dims = DimVector::new(vec![2, 2]).expect("static dims");
    Circuit::new(dims, vec![ControlDftGate::new([(0, 1)], 1)]).expect("static gate")
}

pub fn oneway_set() -> ProductBasis {
    oneway_circuit().generate_basis().expect("single gate is exclusive")
}

pub fn shift_circuit() -> Circuit {
    canonical_circuit(3, &DimVector::uniform(3, 2).expect("static dims")).expect("valid shape")
}

pub fn shift_ensemble() -> ProductBasis {
    shift_circuit().generate_basis().expect("canonical circuits are exclusive")
}

/// Four qutrits, four cyclic gates.
pub fn fig3_circuit() -> Circuit {
    canonical_circuit(4, &DimVector::uniform(4, 3).expect("static dims")).expect("valid shape")
}

/// The four-qutrit circuit followed by the gate `{A:0, B:2, C:1} -> D` and
/// its three cyclic shifts.
pub fn extended_circuit_fig4() -> Circuit {
    let base = fig3_circuit();
    let extra = ControlDftGate::new([(0, 0), (1, 2), (2, 1)], 3);
    let mut gates = base.gates().to_vec();
    gates.extend((0..4).map(|k| extra.shifted(k, 4)));
    Circuit::new(base.dims().clone(), gates).expect("static gates")
}

/// Count of each distinct local factor held by `party` across the basis.
pub fn local_factor_census(basis: &ProductBasis, party: usize) -> BTreeMap<FactorDescriptor, usize> {
    let mut census = BTreeMap::new();
    for s in basis.states() {
        *census.entry(s.factor(party).descriptor()).or_insert(0) += 1;
    }
    census
}

/// Named circuit presets accepted on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    OneWay,
    Shift,
    Fig3,
    Fig4,
    Canonical(DimVector),
}

impl Preset {
    pub fn circuit(&self) -> Result<Circuit> {
        Ok(match self {
            Preset::OneWay => oneway_circuit(),
            Preset::Shift => shift_circuit(),
            Preset::Fig3 => fig3_circuit(),
            Preset::Fig4 => extended_circuit_fig4(),
            Preset::Canonical(dims) => canonical_circuit(dims.parties(), dims)?,
        })
    }

    /// Excluded Fourier index per party used when extracting a UPB: `0` for
    /// the three-qubit preset, `d_j - 1` otherwise.
    pub fn default_excluded(&self, dims: &DimVector) -> Vec<usize> {
        match self {
            Preset::Shift => vec![0; dims.parties()],
            _ => dims.as_slice().iter().map(|d| d - 1).collect(),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// `oneway`, `shift`, `fig3`, `fig4` or `canonical:n=<n>,d=<d1,..,dn>`
    /// (a single `d` is repeated for every party).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "oneway" => return Ok(Preset::OneWay),
            "shift" => return Ok(Preset::Shift),
            "fig3" => return Ok(Preset::Fig3),
            "fig4" => return Ok(Preset::Fig4),
            _ => {}
        }
        let Some(args) = s.strip_prefix("canonical:") else {
            return Err(Error::UnknownPreset(s.to_string()));
        };
        let bad = || Error::UnknownPreset(s.to_string());
        let rest = args.strip_prefix("n=").ok_or_else(bad)?;
        let (n, dims) = rest.split_once(",d=").ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let mut dims: Vec<usize> = dims
            .split(',')
            .map(|d| d.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        if dims.len() == 1 {
            dims = vec![dims[0]; n];
        }
        if dims.len() != n {
            return Err(Error::Construction(format!(
                "canonical preset lists {} dimensions for n={n}",
                dims.len()
            )));
        }
        Ok(Preset::Canonical(DimVector::new(dims)?))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::OneWay => write!(f, "oneway"),
            Preset::Shift => write!(f, "shift"),
            Preset::Fig3 => write!(f, "fig3"),
            Preset::Fig4 => write!(f, "fig4"),
            Preset::Canonical(d) => {
                let ds: Vec<String> = d.as_slice().iter().map(|x| x.to_string()).collect();
                write!(f, "canonical:n={},d={}", d.parties(), ds.join(","))
            }
        }
    }
}
