//! JSON file formats.
//!
//! Floating-point values are written with 17 significant digits and complex
//! numbers as `[re, im]` pairs, so files round-trip bit-exactly and repeated
//! runs produce byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::bound_ent::DensityMatrix;
use crate::circuit::{Circuit, ControlDftGate};
use crate::error::{Error, Result};
use crate::lemma::KrausOperator;
use crate::linalg::{ComplexMatrix, ComplexVector, DimVector, C64};
use crate::report::{Check, VerificationReport};
use crate::state::{Factor, ProductBasis, ProductState};
use crate::upb::Upb;

/// `f64` serialized in scientific notation with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Num)
    }
}

type Pair = [Num; 2];

fn to_pair(z: C64) -> Pair {
    [Num(z.re), Num(z.im)]
}

fn from_pair(p: &Pair) -> C64 {
    C64::new(p[0].0, p[1].0)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FactorJson {
    Cb(usize),
    Dft(usize),
    Dense(Vec<Pair>),
}

#[derive(Debug, Serialize, Deserialize)]
struct StateJson {
    factors: Vec<FactorJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GateJson {
    controls: BTreeMap<usize, usize>,
    target: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CircuitJson {
    dims: Vec<usize>,
    gates: Vec<GateJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasisJson {
    dims: Vec<usize>,
    states: Vec<StateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    circuit: Option<CircuitJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct UpbJson {
    dims: Vec<usize>,
    states: Vec<StateJson>,
    stopper_index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct DensityJson {
    dims: Vec<usize>,
    matrix: Vec<Pair>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckJson {
    name: String,
    pass: bool,
    residual: Option<Num>,
    detail: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportJson {
    checks: Vec<CheckJson>,
}

fn state_to_json(s: &ProductState) -> StateJson {
    StateJson {
        factors: s
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Cb(i) => FactorJson::Cb(*i),
                Factor::Dft(i) => FactorJson::Dft(*i),
                Factor::Dense(v) => FactorJson::Dense(v.entries().iter().map(|&z| to_pair(z)).collect()),
            })
            .collect(),
    }
}

fn state_from_json(s: StateJson, dims: &DimVector) -> Result<ProductState> {
    let factors = s
        .factors
        .into_iter()
        .map(|f| {
            Ok(match f {
                FactorJson::Cb(i) => Factor::Cb(i),
                FactorJson::Dft(i) => Factor::Dft(i),
                FactorJson::Dense(v) => Factor::Dense(ComplexVector::new(v.iter().map(from_pair).collect())?),
            })
        })
        .collect::<Result<_>>()?;
    ProductState::new(factors, dims.clone())
}

fn circuit_to_json(c: &Circuit) -> CircuitJson {
    CircuitJson {
        dims: c.dims().as_slice().to_vec(),
        gates: c
            .gates()
            .iter()
            .map(|g| GateJson {
                controls: g.controls().clone(),
                target: g.target(),
            })
            .collect(),
    }
}

fn circuit_from_dto(c: CircuitJson) -> Result<Circuit> {
    let dims = DimVector::new(c.dims)?;
    let gates = c
        .gates
        .into_iter()
        .map(|g| ControlDftGate::new(g.controls, g.target))
        .collect();
    Circuit::new(dims, gates)
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn circuit_to_string(c: &Circuit) -> Result<String> {
    pretty(&circuit_to_json(c))
}

pub fn circuit_from_str(s: &str) -> Result<Circuit> {
    circuit_from_dto(serde_json::from_str(s)?)
}

/// Basis file, optionally recording the circuit that generated it.
pub fn basis_to_string(basis: &ProductBasis, circuit: Option<&Circuit>) -> Result<String> {
    pretty(&BasisJson {
        dims: basis.dims().as_slice().to_vec(),
        states: basis.states().iter().map(state_to_json).collect(),
        circuit: circuit.map(circuit_to_json),
    })
}

pub fn basis_from_str(s: &str) -> Result<(ProductBasis, Option<Circuit>)> {
    let dto: BasisJson = serde_json::from_str(s)?;
    let dims = DimVector::new(dto.dims)?;
    let states = dto
        .states
        .into_iter()
        .map(|st| state_from_json(st, &dims))
        .collect::<Result<_>>()?;
    let circuit = dto.circuit.map(circuit_from_dto).transpose()?;
    if let Some(c) = &circuit {
        if c.dims() != &dims {
            return Err(Error::Malformed("circuit dimensions differ from basis dimensions".into()));
        }
    }
    Ok((ProductBasis::new(dims, states)?, circuit))
}

pub fn upb_to_string(upb: &Upb) -> Result<String> {
    pretty(&UpbJson {
        dims: upb.dims().as_slice().to_vec(),
        states: upb.states().iter().map(state_to_json).collect(),
        stopper_index: upb.stopper_index(),
    })
}

pub fn upb_from_str(s: &str) -> Result<Upb> {
    let dto: UpbJson = serde_json::from_str(s)?;
    let dims = DimVector::new(dto.dims)?;
    let states = dto
        .states
        .into_iter()
        .map(|st| state_from_json(st, &dims))
        .collect::<Result<_>>()?;
    Upb::new(states, dims, dto.stopper_index)
}

pub fn density_to_string(rho: &DensityMatrix) -> Result<String> {
    pretty(&DensityJson {
        dims: rho.dims().as_slice().to_vec(),
        matrix: rho.matrix().data().iter().map(|&z| to_pair(z)).collect(),
    })
}

pub fn density_from_str(s: &str) -> Result<DensityMatrix> {
    let dto: DensityJson = serde_json::from_str(s)?;
    let dims = DimVector::new(dto.dims)?;
    let d = dims.total();
    let m = ComplexMatrix::new(d, d, dto.matrix.iter().map(from_pair).collect())?;
    DensityMatrix::new(m, dims)
}

/// Kraus operator as nested rows of `[re, im]` pairs.
pub fn kraus_from_str(s: &str) -> Result<KrausOperator> {
    let rows: Vec<Vec<Pair>> = serde_json::from_str(s)?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed("Kraus operator must be a square matrix".into()));
    }
    let data = rows.iter().flat_map(|r| r.iter().map(from_pair)).collect();
    KrausOperator::new(ComplexMatrix::new(n, n, data)?)
}

pub fn kraus_to_string(k: &KrausOperator) -> Result<String> {
    let m = k.matrix();
    let rows: Vec<Vec<Pair>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| to_pair(m[(r, c)])).collect())
        .collect();
    pretty(&rows)
}

pub fn report_to_string(report: &VerificationReport) -> Result<String> {
    pretty(&ReportJson {
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.clone(),
                pass: c.passed,
                residual: c.residual.map(Num),
                detail: c.detail.clone(),
            })
            .collect(),
    })
}

pub fn report_from_str(s: &str) -> Result<VerificationReport> {
    let dto: ReportJson = serde_json::from_str(s)?;
    Ok(VerificationReport {
        checks: dto
            .checks
            .into_iter()
            .map(|c| Check {
                name: c.name,
                passed: c.pass,
                residual: c.residual.map(|n| n.0),
                detail: c.detail,
            })
            .collect(),
    })
}
