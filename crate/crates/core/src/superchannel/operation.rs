use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, partial_trace, tensor_product, ComplexMatrix, ONE};
use crate::maps::QuantumMap;
use crate::tol;

/// Whether an operation preserves or may decrease the trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TraceClass {
    #[serde(rename = "tp")]
    Preserving,
    #[serde(rename = "tni")]
    NonIncreasing,
}

impl TraceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceClass::Preserving => "tp",
            TraceClass::NonIncreasing => "tni",
        }
    }
}

impl fmt::Display for TraceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TraceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tp" => Ok(TraceClass::Preserving),
            "tni" => Ok(TraceClass::NonIncreasing),
            _ => Err(Error::param(format!("unknown trace class {s:?}"))),
        }
    }
}

/// CP, trace non-increasing operation on a `d`-dimensional system, stored as
/// its B form (leg order `out ⊗ in`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperationEnvelope", into = "OperationEnvelope")]
pub struct ControlOperation {
    d: usize,
    bform: ComplexMatrix,
    trace_class: TraceClass,
}

/// On-disk form of a [`ControlOperation`], before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperationEnvelope {
    pub d: usize,
    pub bform: ComplexMatrix,
    pub trace_class: TraceClass,
}

impl TryFrom<OperationEnvelope> for ControlOperation {
    type Error = Error;

    fn try_from(r: OperationEnvelope) -> Result<Self> {
        let op = ControlOperation::new(r.bform, r.trace_class)?;
        if op.d != r.d {
            return Err(Error::dims(format!(
                "declared d = {} but B form has d = {}",
                r.d, op.d
            )));
        }
        Ok(op)
    }
}

impl From<ControlOperation> for OperationEnvelope {
    fn from(op: ControlOperation) -> Self {
        OperationEnvelope {
            d: op.d,
            bform: op.bform,
            trace_class: op.trace_class,
        }
    }
}

fn side_length(n: usize) -> Option<usize> {
    let d = (n as f64).sqrt().round() as usize;
    (d > 0 && d * d == n).then_some(d)
}

impl ControlOperation {
    /// Validates complete positivity and the trace condition of `class`.
    pub fn new(bform: ComplexMatrix, class: TraceClass) -> Result<Self> {
        let d = (bform.is_square())
            .then(|| side_length(bform.rows()))
            .flatten()
            .ok_or_else(|| {
                Error::dims(format!(
                    "{:?} is not the B form of an operation on one system",
                    bform.shape()
                ))
            })?;
        let defect = bform.hermiticity_defect();
        if defect > tol::VERDICT {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let min = herm_eig(&bform.hermitian_part())?.min_eigenvalue();
        if min < -tol::VERDICT {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let marginal = partial_trace(&bform, &[d, d], &[1])?.hermitian_part();
        let slack = &ComplexMatrix::identity(d) - &marginal;
        let slack_min = herm_eig(&slack)?.min_eigenvalue();
        if slack_min < -tol::VERDICT {
            return Err(Error::invariant(format!(
                "operation increases the trace (1 - tr_out B has eigenvalue {slack_min:.3e})"
            )));
        }
        if class == TraceClass::Preserving {
            let residual = slack.frobenius_norm();
            if residual > tol::VERDICT {
                return Err(Error::invariant(format!(
                    "operation declared trace preserving has residual {residual:.3e}"
                )));
            }
        }
        Ok(ControlOperation {
            d,
            bform,
            trace_class: class,
        })
    }

    /// Wraps a map on a single system, classifying it by its trace behavior.
    pub fn from_map(map: &QuantumMap) -> Result<Self> {
        if map.d_in() != map.d_out() {
            return Err(Error::dims("control operations act on a single system"));
        }
        let class = if crate::maps::check_tp(map).holds {
            TraceClass::Preserving
        } else {
            TraceClass::NonIncreasing
        };
        Self::new(map.to_bform().into_matrix(), class)
    }

    /// The identity operation.
    pub fn identity(d: usize) -> Self {
        let v = ComplexMatrix::column(ComplexMatrix::identity(d).into_data());
        ControlOperation {
            d,
            bform: ComplexMatrix::outer(&v, &v),
            trace_class: TraceClass::Preserving,
        }
    }

    /// `ρ ↦ P ρ P` for a projector or other contraction `P`.
    pub fn projection(p: &ComplexMatrix) -> Result<Self> {
        let map = QuantumMap::from_kraus(vec![p.clone()])?;
        Self::new(map.to_bform().into_matrix(), TraceClass::NonIncreasing)
    }

    /// `ρ ↦ σ tr(E ρ)` for an effect `0 ≤ E ≤ 1` and a state `σ`; its B form is
    /// `σ ⊗ Eᵀ`.
    pub fn measure_prepare(effect: &ComplexMatrix, prepared: &ComplexMatrix) -> Result<Self> {
        Self::new(
            tensor_product(prepared, &effect.transpose()),
            TraceClass::NonIncreasing,
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bform(&self) -> &ComplexMatrix {
        &self.bform
    }

    pub fn trace_class(&self) -> TraceClass {
        self.trace_class
    }

    pub fn to_map(&self) -> QuantumMap {
        QuantumMap::from_bform(self.bform.clone(), self.d, self.d).expect("shape validated")
    }

    /// Acts on a system state.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.to_map().apply(rho)
    }

    /// `tr_out B`; the identity for trace-preserving operations.
    pub fn trace_marginal(&self) -> ComplexMatrix {
        partial_trace(&self.bform, &[self.d, self.d], &[1]).expect("shape validated")
    }

    /// Whether `tr_out B = 1` within the verdict tolerance.
    pub fn is_trace_preserving(&self) -> bool {
        let mut m = self.trace_marginal();
        for k in 0..self.d {
            m[(k, k)] -= ONE;
        }
        m.frobenius_norm() <= tol::VERDICT
    }
}
