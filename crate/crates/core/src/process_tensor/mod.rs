//! Multi-time process tensors.
//!
//! A `k`-step process tensor is stored as its Choi state on `2k + 1` legs of
//! dimension `d_s`, ordered
//!
//! ```text
//! out_k, in_{k-1}, out_{k-1}, ..., in_0, out_0
//! ```
//!
//! where `out_j` is the system as the process hands it over at time `t_j`
//! (`out_0` is the pre-preparation state and `out_k` the final output) and
//! `in_j` is what the process receives back from the operation at `t_j`.
//! Step `j ≥ 1` occupies the adjacent legs `(out_j, in_{j-1})`; step 0 is the
//! single leg `out_0`. An operation sequence is contracted against legs
//! `1..=2k` as
//!
//! ```text
//! out[r, s] = Σ_{K,L} Υ[(r, K), (s, L)] · A[K, L]
//! ```
//!
//! with the joint operation B form ordered
//! `op_out_{k-1}, op_in_{k-1}, ..., op_out_0, op_in_0`.

mod build;
mod chi;
mod markov;
mod sequence;

pub use build::build_process_tensor;
pub(crate) use build::max_entangled;
pub use chi::{chi_decomposition, reconstruct_from_chi, ChiTerm};
pub use markov::{is_markov, non_markovianity, surprise, Distance};
pub use sequence::OperationSequence;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, partial_trace, reshuffle, tensor_product, ComplexMatrix, ZERO};
use crate::maps::{BForm, ResidualCheck};
use crate::tol;

/// Largest Choi dimension `d_s^{2k+1}` handled.
pub const MAX_CHOI_DIM: usize = 128;

/// Largest dimension of the dilated working space `d_s^{2k+1} · d_e` used
/// while building a tensor.
pub const MAX_WORKING_DIM: usize = 4096;

pub(crate) fn check_resource(k: usize, d_s: usize) -> Result<usize> {
    let legs = 2 * k + 1;
    let dim = (d_s as u128).checked_pow(legs as u32).unwrap_or(u128::MAX);
    if dim > MAX_CHOI_DIM as u128 {
        return Err(Error::ResourceBound(format!(
            "a {k}-step process tensor with d_s = {d_s} has Choi dimension {dim}, limit is {MAX_CHOI_DIM}"
        )));
    }
    Ok(dim as usize)
}

/// Canonical leg order string for `k` steps, e.g. `out_2,in_1,out_1,in_0,out_0`.
pub fn leg_order(k: usize) -> String {
    let mut legs = vec![format!("out_{k}")];
    for j in (0..k).rev() {
        legs.push(format!("in_{j}"));
        legs.push(format!("out_{j}"));
    }
    legs.join(",")
}

/// Leg positions of time slot `j` (step `j ≥ 1`, or the initial state for `j = 0`).
pub fn slot_legs(k: usize, j: usize) -> Vec<usize> {
    assert!(j <= k, "slot {j} out of range for {k} steps");
    if j == 0 {
        vec![2 * k]
    } else {
        vec![2 * (k - j), 2 * (k - j) + 1]
    }
}

/// Choi state of a `k`-step process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProcessTensorEnvelope", into = "ProcessTensorEnvelope")]
pub struct ProcessTensor {
    k: usize,
    d_s: usize,
    choi: ComplexMatrix,
}

/// On-disk form of a [`ProcessTensor`], before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessTensorEnvelope {
    pub k: usize,
    pub d_s: usize,
    pub leg_order: String,
    pub choi: ComplexMatrix,
}

impl TryFrom<ProcessTensorEnvelope> for ProcessTensor {
    type Error = Error;

    fn try_from(r: ProcessTensorEnvelope) -> Result<Self> {
        let expected = leg_order(r.k);
        if r.leg_order.replace(' ', "") != expected {
            return Err(Error::Format(format!(
                "leg_order must be {expected:?}, got {:?}",
                r.leg_order
            )));
        }
        ProcessTensor::new(r.k, r.d_s, r.choi)
    }
}

impl From<ProcessTensor> for ProcessTensorEnvelope {
    fn from(pt: ProcessTensor) -> Self {
        ProcessTensorEnvelope {
            k: pt.k,
            d_s: pt.d_s,
            leg_order: leg_order(pt.k),
            choi: pt.choi,
        }
    }
}

impl ProcessTensor {
    /// Validates shape, Hermiticity, positivity, normalization and causality.
    pub fn new(k: usize, d_s: usize, choi: ComplexMatrix) -> Result<Self> {
        if k == 0 || d_s == 0 {
            return Err(Error::param("a process tensor needs k >= 1 and d_s >= 1"));
        }
        let dim = check_resource(k, d_s)?;
        if choi.shape() != (dim, dim) {
            return Err(Error::dims(format!(
                "Choi state must be {dim}x{dim}, got {:?}",
                choi.shape()
            )));
        }
        let defect = choi.hermiticity_defect();
        if defect > tol::VERDICT {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let min = herm_eig(&choi.hermitian_part())?.min_eigenvalue();
        if min < -tol::VERDICT {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let pt = ProcessTensor { k, d_s, choi };
        let causal = pt.check_causality();
        if !causal.holds {
            return Err(Error::invariant(format!(
                "causality residual {:.3e}",
                causal.residual
            )));
        }
        Ok(pt)
    }

    pub(crate) fn from_choi_unchecked(k: usize, d_s: usize, choi: ComplexMatrix) -> Self {
        ProcessTensor { k, d_s, choi }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    /// Number of legs, `2k + 1`.
    pub fn legs(&self) -> usize {
        2 * self.k + 1
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> ComplexMatrix {
        self.choi
    }

    pub(crate) fn leg_dims(&self) -> Vec<usize> {
        vec![self.d_s; self.legs()]
    }

    /// The B form, which is the stored Choi state.
    pub fn bform(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// The A form: `A[(r s), (K L)] = Υ[(r K), (s L)]`, so that
    /// `vec(out) = A · vec(A_joint)`.
    pub fn aform(&self) -> ComplexMatrix {
        reshuffle(&self.choi, self.d_s, self.d_s.pow(2 * self.k as u32)).expect("shape validated")
    }

    /// Contracts the tensor with an operation sequence. The trace of the
    /// result is the probability of the sequence.
    pub fn apply(&self, seq: &OperationSequence) -> Result<ComplexMatrix> {
        if seq.k() != self.k || seq.d() != self.d_s {
            return Err(Error::dims(format!(
                "sequence of {} steps on d = {} applied to a {}-step tensor with d_s = {}",
                seq.k(),
                seq.d(),
                self.k,
                self.d_s
            )));
        }
        let joint = seq.joint_bform();
        Ok(contract(&self.choi, &joint, self.d_s))
    }

    /// B form of the step `j` channel on legs `(out_j, in_{j-1})`,
    /// `tr_{j̄} Υ / d_s^{k-1}`.
    pub fn step_map(&self, j: usize) -> Result<BForm> {
        if j == 0 || j > self.k {
            return Err(Error::param(format!(
                "step {j} out of range 1..={}",
                self.k
            )));
        }
        let m = partial_trace(&self.choi, &self.leg_dims(), &slot_legs(self.k, j))?;
        let norm = (self.d_s as f64).powi(self.k as i32 - 1);
        BForm::new(m.scale_real(1.0 / norm), self.d_s, self.d_s)
    }

    /// Pre-preparation state `tr_{0̄} Υ / d_s^k`.
    pub fn initial_state(&self) -> ComplexMatrix {
        let m =
            partial_trace(&self.choi, &self.leg_dims(), &[2 * self.k]).expect("shape validated");
        m.scale_real(1.0 / (self.d_s as f64).powi(self.k as i32))
    }

    /// `Υ_Mkv = 𝓔^{k:k-1}_B ⊗ ⋯ ⊗ 𝓔^{1:0}_B ⊗ ρ⁰`.
    pub fn markov_product(&self) -> ProcessTensor {
        let mut acc = ComplexMatrix::identity(1);
        for j in (1..=self.k).rev() {
            acc = tensor_product(&acc, self.step_map(j).expect("slot in range").matrix());
        }
        acc = tensor_product(&acc, &self.initial_state());
        ProcessTensor::from_choi_unchecked(self.k, self.d_s, acc)
    }

    /// Process on the first `k − 1` steps, `tr_{out_k, in_{k-1}} Υ / d_s`.
    pub fn truncated(&self) -> Result<ProcessTensor> {
        if self.k < 2 {
            return Err(Error::param(
                "a one-step process cannot be truncated further",
            ));
        }
        let keep: Vec<usize> = (2..self.legs()).collect();
        let m = partial_trace(&self.choi, &self.leg_dims(), &keep)?;
        Ok(ProcessTensor::from_choi_unchecked(
            self.k - 1,
            self.d_s,
            m.scale_real(1.0 / self.d_s as f64),
        ))
    }

    /// Comb conditions at every level: `tr_{out_j} Υ^{j:0} = 1_{in_{j-1}} ⊗ Υ^{j-1:0}`
    /// for `j = k, …, 1`, with `tr Υ^{0} = 1`. The residual is the largest
    /// Frobenius defect.
    pub fn check_causality(&self) -> ResidualCheck {
        let d = self.d_s;
        let mut worst: f64 = 0.0;
        let mut current = self.choi.clone();
        for level in (1..=self.k).rev() {
            let legs = 2 * level + 1;
            let dims = vec![d; legs];
            let reduced =
                partial_trace(&current, &dims, &(1..legs).collect::<Vec<_>>()).expect("shape");
            let lower = partial_trace(&current, &dims, &(2..legs).collect::<Vec<_>>())
                .expect("shape")
                .scale_real(1.0 / d as f64);
            let expected = tensor_product(&ComplexMatrix::identity(d), &lower);
            worst = worst.max(reduced.distance(&expected));
            current = lower;
        }
        let tr = current.trace();
        worst = worst.max((tr - crate::linalg::ONE).norm());
        ResidualCheck {
            holds: worst <= tol::VERDICT,
            residual: worst,
        }
    }

    /// Smallest eigenvalue of the Choi state.
    pub fn min_eigenvalue(&self) -> f64 {
        herm_eig(&self.choi.hermitian_part())
            .expect("Hermitian part")
            .min_eigenvalue()
    }

    /// `Υ / tr Υ`.
    pub fn normalized_choi(&self) -> ComplexMatrix {
        let tr = self.choi.trace().re;
        self.choi.scale_real(1.0 / tr)
    }
}

/// `out[r, s] = Σ_{K,L} Υ[(r, K), (s, L)] · M[K, L]` for `Υ` on `d_out × m` legs.
pub(crate) fn contract(upsilon: &ComplexMatrix, m: &ComplexMatrix, d_out: usize) -> ComplexMatrix {
    let n = m.rows();
    ComplexMatrix::from_fn(d_out, d_out, |r, s| {
        let mut acc = ZERO;
        for kk in 0..n {
            let row = r * n + kk;
            for ll in 0..n {
                let x = m[(kk, ll)];
                if x != ZERO {
                    acc += upsilon[(row, s * n + ll)] * x;
                }
            }
        }
        acc
    })
}
