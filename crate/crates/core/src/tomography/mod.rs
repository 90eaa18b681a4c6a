//! Simulated tomography at the density-matrix level: channel tomography over a
//! state basis, ancilla-assisted tomography, process-tensor tomography over a
//! basis of operation sequences, and the correlated-preparation demonstration
//! in [`ncp`].

pub mod ncp;

pub use ncp::{
    ncp_demo, ConditionalEnvironment, LinearExtension, NcpReport, NcpScenario, NcpSuperchannel,
    NcpVerdicts, PreparationProtocol,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::Dilation;
use crate::error::{Error, Result};
use crate::linalg::{
    conjugate_trailing, partial_trace, permute_subsystems, tensor_all, tensor_product,
    ComplexMatrix, ZERO,
};
use crate::maps::{dual_basis, duality_residual, state_basis, BForm, QuantumMap, TomographicRep};
use crate::process_tensor::{self, OperationSequence, ProcessTensor};
use crate::superchannel::{ControlOperation, TraceClass};
use crate::tol;

/// Outcome of one simulated experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyRecord {
    pub prepared: String,
    /// Unnormalized output; its trace is the success probability.
    pub output_state: ComplexMatrix,
    pub success_probability: f64,
}

impl TomographyRecord {
    fn new(prepared: impl Into<String>, output_state: ComplexMatrix) -> Self {
        let success_probability = output_state.trace().re;
        TomographyRecord {
            prepared: prepared.into(),
            output_state,
            success_probability,
        }
    }

    /// Output conditioned on success.
    pub fn normalized_output(&self) -> Result<ComplexMatrix> {
        if self.success_probability <= tol::SUPPORT {
            return Err(Error::invariant(format!(
                "preparation {:?} never succeeds",
                self.prepared
            )));
        }
        Ok(self.output_state.scale_real(1.0 / self.success_probability))
    }
}

/// `d⁴` measure-and-prepare operations with their duals on the doubled space.
#[derive(Clone, Debug)]
pub struct OperationBasis {
    d: usize,
    elements: Vec<ControlOperation>,
    duals: Vec<ComplexMatrix>,
}

impl OperationBasis {
    /// Element `(i, j)` (flat index `i·d² + j`) projects onto `ρ_i` and
    /// prepares `ρ_j`; its B form is `ρ_j ⊗ ρ_iᵀ`.
    pub fn from_states(states: &[ComplexMatrix]) -> Result<Self> {
        let d = crate::maps::check_basis(states)?;
        let mut elements = Vec::with_capacity(states.len() * states.len());
        for effect in states {
            for prepared in states {
                elements.push(ControlOperation::measure_prepare(effect, prepared)?);
            }
        }
        let bforms: Vec<ComplexMatrix> = elements.iter().map(|e| e.bform().clone()).collect();
        let duals = dual_basis(&bforms)?;
        let residual = duality_residual(&bforms, &duals);
        if residual > tol::DUALITY {
            return Err(Error::invariant(format!(
                "operation duals have residual {residual:.3e}"
            )));
        }
        Ok(OperationBasis { d, elements, duals })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ControlOperation] {
        &self.elements
    }

    pub fn duals(&self) -> &[ComplexMatrix] {
        &self.duals
    }

    /// Element that projects onto state `i` and prepares state `j`.
    pub fn element(&self, i: usize, j: usize) -> &ControlOperation {
        &self.elements[i * self.d * self.d + j]
    }
}

/// Measure-and-prepare operation basis built on [`state_basis`].
pub fn operation_basis(d: usize) -> Result<OperationBasis> {
    OperationBasis::from_states(&state_basis(d)?)
}

fn check_sequence(dilation: &Dilation, seq: &OperationSequence) -> Result<()> {
    if seq.k() != dilation.k() || seq.d() != dilation.d_s() {
        return Err(Error::dims(format!(
            "sequence of {} steps on d = {} does not fit a {}-step dilation with d_s = {}",
            seq.k(),
            seq.d(),
            dilation.k(),
            dilation.d_s()
        )));
    }
    Ok(())
}

/// `(A ⊗ 1_e)[X]` for `X` on `s ⊗ e`.
fn apply_on_system(op: &ComplexMatrix, x: &ComplexMatrix, d: usize, d_e: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d_e, d * d_e, |af, cg| {
        let (a, f) = (af / d_e, af % d_e);
        let (cc, g) = (cg / d_e, cg % d_e);
        let mut acc = ZERO;
        for b in 0..d {
            for dd in 0..d {
                let w = op[(a * d + b, cc * d + dd)];
                if w != ZERO {
                    acc += w * x[(b * d_e + f, dd * d_e + g)];
                }
            }
        }
        acc
    })
}

/// Runs a sequence through the dilated dynamics by direct propagation of the
/// joint state, alternating operations on the system with the joint
/// unitaries, and traces out the environment.
pub fn simulate_sequence(dilation: &Dilation, seq: &OperationSequence) -> Result<TomographyRecord> {
    check_sequence(dilation, seq)?;
    let (d, d_e) = (dilation.d_s(), dilation.d_e());
    let output = match seq {
        OperationSequence::Product(ops) => {
            let mut x = dilation.initial_se().clone();
            for (op, u) in ops.iter().zip(dilation.unitaries()) {
                x = u.sandwich(&apply_on_system(op.bform(), &x, d, d_e));
            }
            partial_trace(&x, &[d, d_e], &[0])?
        }
        OperationSequence::Joint { k, bform, .. } => simulate_joint(dilation, *k, bform)?,
    };
    Ok(TomographyRecord::new("sequence", output))
}

/// Correlated sequences: the joint B form is attached to the system and
/// environment, and at each step the earliest remaining operation legs are
/// contracted with the system before the next unitary.
fn simulate_joint(dilation: &Dilation, k: usize, joint: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (d, d_e) = (dilation.d_s(), dilation.d_e());
    // Legs: (remaining op legs R, op_out_j, op_in_j, s, e).
    let mut y = tensor_product(joint, dilation.initial_se());
    for (j, u) in dilation.unitaries().iter().enumerate() {
        let r = d.pow(2 * (k - 1 - j) as u32);
        let inner = d * d * d * d_e;
        let out_dim = r * d * d_e;
        let contracted = ComplexMatrix::from_fn(out_dim, out_dim, |row, col| {
            let (rr, a, f) = (row / (d * d_e), (row / d_e) % d, row % d_e);
            let (rc, c, g) = (col / (d * d_e), (col / d_e) % d, col % d_e);
            let mut acc = ZERO;
            for b in 0..d {
                let yr = rr * inner + ((a * d + b) * d + b) * d_e + f;
                for dd in 0..d {
                    let yc = rc * inner + ((c * d + dd) * d + dd) * d_e + g;
                    acc += y[(yr, yc)];
                }
            }
            acc
        });
        y = conjugate_trailing(&contracted, u);
    }
    partial_trace(&y, &[d, d_e], &[0])
}

/// Assembles the tomographic representation from one record per basis
/// element, using the outputs conditioned on success.
pub fn reconstruct_map(
    records: &[TomographyRecord],
    basis: &[ComplexMatrix],
) -> Result<QuantumMap> {
    if records.len() != basis.len() {
        return Err(Error::param(format!(
            "{} records for a basis of {} elements",
            records.len(),
            basis.len()
        )));
    }
    let outputs = records
        .iter()
        .map(|r| r.normalized_output())
        .collect::<Result<Vec<_>>>()?;
    Ok(TomographicRep::new(basis.to_vec(), outputs)?.into())
}

/// Channel tomography on a single-step dilation: each basis state replaces the
/// system state before the unitary acts.
pub fn simulate_state_tomography(
    dilation: &Dilation,
    basis: &[ComplexMatrix],
) -> Result<Vec<TomographyRecord>> {
    if dilation.k() != 1 {
        return Err(Error::param(
            "state tomography runs on single-step dilations",
        ));
    }
    let d = dilation.d_s();
    basis
        .iter()
        .enumerate()
        .map(|(i, rho)| {
            let op = ControlOperation::new(
                tensor_product(rho, &ComplexMatrix::identity(d)),
                TraceClass::Preserving,
            )?;
            let rec = simulate_sequence(dilation, &OperationSequence::product(vec![op])?)?;
            Ok(TomographyRecord {
                prepared: format!("basis[{i}]"),
                ..rec
            })
        })
        .collect()
}

/// Ancilla-assisted tomography: half of `|I⟩⟨I|/d` is sent through the
/// channel and the joint output is rescaled by `d` to give the B form.
pub fn ancilla_assisted(dilation: &Dilation) -> Result<BForm> {
    if dilation.k() != 1 {
        return Err(Error::param(
            "ancilla-assisted tomography runs on single-step dilations",
        ));
    }
    if !dilation.is_product(tol::VERDICT) {
        return Err(Error::invariant(
            "ancilla-assisted tomography presumes an uncorrelated initial state",
        ));
    }
    let (d, d_e) = (dilation.d_s(), dilation.d_e());
    let pair = process_tensor::max_entangled(d);
    let tau = dilation.initial_environment_state();
    // (s, a, e) -> (a, s, e), evolve (s, e), trace e, reorder to (s, a).
    let x = permute_subsystems(&tensor_product(&pair, &tau), &[d, d, d_e], &[1, 0, 2])?;
    let x = conjugate_trailing(&x, &dilation.unitaries()[0]);
    let reduced = partial_trace(&x, &[d, d, d_e], &[0, 1])?;
    let b = permute_subsystems(&reduced, &[d, d], &[1, 0])?;
    BForm::new(b, d, d)
}

/// Process-tensor tomography: every sequence of basis operations is simulated
/// and the Choi state is assembled as `Σ_𝐢 ρ′_𝐢 ⊗ conj(Δ_{i_{k-1}} ⊗ ⋯ ⊗ Δ_{i_0})`.
/// Sequences are simulated in parallel; the sum runs in sequence order so the
/// result does not depend on scheduling.
pub fn reconstruct_process_tensor(
    dilation: &Dilation,
    basis: &OperationBasis,
) -> Result<ProcessTensor> {
    let (d, k) = (dilation.d_s(), dilation.k());
    if basis.d() != d {
        return Err(Error::dims(format!(
            "operation basis on d = {} for a system with d = {d}",
            basis.d()
        )));
    }
    let choi_dim = process_tensor::check_resource(k, d)?;
    let n = basis.len();
    let total = n.pow(k as u32);
    // Digits of a flat sequence index in base n, most significant first: (i_{k-1}, ..., i_0).
    let digits = |flat: usize| -> Vec<usize> {
        let mut out = vec![0usize; k];
        let mut rest = flat;
        for slot in (0..k).rev() {
            out[slot] = rest % n;
            rest /= n;
        }
        out
    };

    let outputs = (0..total)
        .into_par_iter()
        .map(|flat| {
            let ops: Vec<ControlOperation> = digits(flat)
                .iter()
                .rev()
                .map(|&i| basis.elements[i].clone())
                .collect();
            simulate_sequence(dilation, &OperationSequence::Product(ops)).map(|r| r.output_state)
        })
        .collect::<Result<Vec<_>>>()?;

    let conj_duals: Vec<ComplexMatrix> = basis.duals().iter().map(|m| m.conj()).collect();
    let mut choi = ComplexMatrix::zeros(choi_dim, choi_dim);
    for (flat, out) in outputs.iter().enumerate() {
        let dual = tensor_all(digits(flat).iter().map(|&i| &conj_duals[i]));
        choi += &tensor_product(out, &dual);
    }
    Ok(ProcessTensor::from_choi_unchecked(k, d, choi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operation_basis_labels() {
        let b = operation_basis(2).unwrap();
        assert_eq!(b.len(), 16);
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let expected = tensor_product(&p0, &p0);
        assert!(b.element(2, 2).bform().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn reconstruction_needs_every_record() {
        let basis = state_basis(2).unwrap();
        let rec = TomographyRecord::new("x", ComplexMatrix::identity(2).scale_real(0.5));
        assert!(reconstruct_map(&[rec.clone(), rec.clone(), rec], &basis).is_err());
    }

    #[test]
    fn mismatched_sequence_is_rejected() {
        let d = Dilation::product(
            &ComplexMatrix::diag_real(&[1.0, 0.0]),
            &ComplexMatrix::diag_real(&[1.0, 0.0]),
            vec![ComplexMatrix::identity(4)],
        )
        .unwrap();
        assert!(simulate_sequence(&d, &OperationSequence::identity(2, 2)).is_err());
    }
}
