//! The superchannel: the map from control operations to output states for a
//! single step of dynamics with a possibly correlated initial state.
//!
//! It is the one-step process tensor, with legs `(out, op_out, op_in)`.

mod operation;

pub use operation::{ControlOperation, OperationEnvelope, TraceClass};

use crate::channels::Dilation;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, permute_subsystems, ComplexMatrix, ZERO};
use crate::maps::BForm;
use crate::process_tensor::{build_process_tensor, OperationSequence, ProcessTensor};
use crate::tol;

/// One-step process tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Superchannel {
    pt: ProcessTensor,
}

impl Superchannel {
    pub fn from_process_tensor(pt: ProcessTensor) -> Result<Self> {
        if pt.k() != 1 {
            return Err(Error::param(format!(
                "a superchannel is a one-step process, got k = {}",
                pt.k()
            )));
        }
        Ok(Superchannel { pt })
    }

    pub fn d_s(&self) -> usize {
        self.pt.d_s()
    }

    /// Three-leg Choi state with leg order `(out, op_out, op_in)`.
    pub fn choi(&self) -> &ComplexMatrix {
        self.pt.choi()
    }

    pub fn process_tensor(&self) -> &ProcessTensor {
        &self.pt
    }

    pub fn into_process_tensor(self) -> ProcessTensor {
        self.pt
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.pt.min_eigenvalue()
    }
}

fn single_step(dilation: &Dilation) -> Result<()> {
    if dilation.k() != 1 {
        return Err(Error::param(format!(
            "superchannel needs exactly one unitary, got {}",
            dilation.k()
        )));
    }
    Ok(())
}

/// `𝓜[𝒜] = tr_e{U (𝒜 ⊗ 𝓘_e)[ρ_se] U†}` as a three-leg Choi state.
pub fn build_superchannel(dilation: &Dilation) -> Result<Superchannel> {
    single_step(dilation)?;
    Superchannel::from_process_tensor(build_process_tensor(dilation)?)
}

/// `𝓜[𝒜]`; the trace of the output is the success probability of `op`.
pub fn apply_superchannel(sc: &Superchannel, op: &ControlOperation) -> Result<ComplexMatrix> {
    sc.pt.apply(&OperationSequence::product(vec![op.clone()])?)
}

/// Kraus operators `μ_{εx}` of the superchannel, each a `d_s × d_s²` matrix
/// acting on the B form of an operation as `𝓜[𝒜] = Σ μ 𝒜_B μ†`.
///
/// With `ρ_se = Σ_x λ_x |Ψ_x⟩⟨Ψ_x|`,
/// `μ_{εx}[r, (a b)] = √λ_x Σ_f U[(r ε), (a f)] Ψ_x[(b f)]`.
/// Eigenvectors with `λ_x` below the initial-state cutoff are skipped.
pub fn superchannel_kraus(dilation: &Dilation) -> Result<Vec<ComplexMatrix>> {
    single_step(dilation)?;
    let (d, d_e) = (dilation.d_s(), dilation.d_e());
    let u = &dilation.unitaries()[0];
    let e = herm_eig(&dilation.initial_se().hermitian_part())?;
    let mut out = Vec::new();
    for (x, &lambda) in e.eigenvalues.iter().enumerate() {
        if lambda < tol::INITIAL_STATE_CUTOFF {
            continue;
        }
        let amp = lambda.sqrt();
        let psi = e.eigenvectors.column_at(x);
        for eps in 0..d_e {
            out.push(ComplexMatrix::from_fn(d, d * d, |r, ab| {
                let (a, b) = (ab / d, ab % d);
                let mut acc = ZERO;
                for f in 0..d_e {
                    acc += u[(r * d_e + eps, a * d_e + f)] * psi[(b * d_e + f, 0)];
                }
                acc * amp
            }));
        }
    }
    Ok(out)
}

/// `Σ_α μ_α 𝒜_B μ_α†`.
pub fn apply_kraus(mus: &[ComplexMatrix], op: &ControlOperation) -> ComplexMatrix {
    let d = op.d();
    let mut out = ComplexMatrix::zeros(d, d);
    for mu in mus {
        out += &mu.sandwich(op.bform());
    }
    out
}

/// `(𝓜 ⊗ 𝓘_a)` applied to an operation that takes the system to
/// `system ⊗ ancilla`. `op` is the B form of that map (legs
/// `s_out, a_out, s_in`); the result is the joint state on `s ⊗ a`.
pub fn apply_extended(sc: &Superchannel, op: &BForm) -> Result<ComplexMatrix> {
    let d = sc.d_s();
    if op.d_in() != d || !op.d_out().is_multiple_of(d) {
        return Err(Error::dims(format!(
            "extended operation must map {d} -> {d}·d_a, got {} -> {}",
            op.d_in(),
            op.d_out()
        )));
    }
    let d_a = op.d_out() / d;
    // Reorder to (s_out, s_in, a_out) so the system legs come first.
    let x = permute_subsystems(op.matrix(), &[d, d_a, d], &[0, 2, 1])?;
    let y = sc.choi();
    let n = d * d;
    Ok(ComplexMatrix::from_fn(d * d_a, d * d_a, |ra, sb| {
        let (r, a) = (ra / d_a, ra % d_a);
        let (s, b) = (sb / d_a, sb % d_a);
        let mut acc = ZERO;
        for kk in 0..n {
            for ll in 0..n {
                let xv = x[(kk * d_a + a, ll * d_a + b)];
                if xv != ZERO {
                    acc += y[(r * n + kk, s * n + ll)] * xv;
                }
            }
        }
        acc
    }))
}
