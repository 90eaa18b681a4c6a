//! Trace preservation, Hermiticity preservation and complete positivity.

use super::{OperatorSumRep, QuantumMap, Representation};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, partial_trace, ComplexMatrix, ONE};
use crate::tol;

/// Verdict of a structural identity together with the Frobenius norm of its
/// defect.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualCheck {
    pub holds: bool,
    pub residual: f64,
}

impl ResidualCheck {
    fn from_residual(residual: f64) -> Self {
        ResidualCheck {
            holds: residual <= tol::VERDICT,
            residual,
        }
    }
}

/// Complete-positivity verdict with the smallest eigenvalue of the
/// (Hermitian part of the) B form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpCheck {
    pub holds: bool,
    pub min_eigenvalue: f64,
}

/// Trace preservation, tested with the criterion native to the stored
/// representation:
///
/// * operator sum: `Σ_α R_α† L_α = 1`
/// * tomographic: `Σ_i tr(ρ′_i) D_i† = 1`
/// * A form: `⟨I| 𝓔_A = ⟨I|`
/// * B form: `tr_out 𝓔_B = 1_in`
pub fn check_tp(map: &QuantumMap) -> ResidualCheck {
    let d_in = map.d_in();
    let mut defect = match map.representation() {
        Representation::OperatorSum(o) => {
            let mut acc = ComplexMatrix::zeros(d_in, d_in);
            for (l, r) in o.left().iter().zip(o.right()) {
                acc += &r.adjoint().matmul(l);
            }
            acc
        }
        Representation::Tomographic(t) => {
            let mut acc = ComplexMatrix::zeros(d_in, d_in);
            for (dual, output) in t.duals().iter().zip(t.outputs()) {
                acc += &dual.adjoint().scale(output.trace());
            }
            acc
        }
        Representation::AForm(a) => {
            let d_out = map.d_out();
            let m = a.matrix();
            ComplexMatrix::from_fn(d_in, d_in, |s, sp| {
                (0..d_out).map(|r| m[(r * d_out + r, s * d_in + sp)]).sum()
            })
        }
        Representation::BForm(b) => partial_trace(b.matrix(), &[map.d_out(), d_in], &[1])
            .expect("B form shape is consistent"),
    };
    for k in 0..d_in {
        defect[(k, k)] -= ONE;
    }
    ResidualCheck::from_residual(defect.frobenius_norm())
}

/// Hermiticity preservation: the B form is Hermitian.
pub fn check_hp(map: &QuantumMap) -> ResidualCheck {
    ResidualCheck::from_residual(map.to_bform().matrix().hermiticity_defect())
}

/// Complete positivity: the B form is positive semidefinite.
pub fn check_cp(map: &QuantumMap) -> CpCheck {
    let b = map.to_bform().into_matrix();
    let hermitian = b.hermiticity_defect() <= tol::VERDICT;
    let e = herm_eig(&b.hermitian_part()).expect("Hermitian part is Hermitian");
    let min_eigenvalue = e.min_eigenvalue();
    CpCheck {
        holds: hermitian && min_eigenvalue >= -tol::VERDICT,
        min_eigenvalue,
    }
}

/// Number of B-form eigenvalues above the support threshold. Fails on maps
/// that are not CP.
pub fn kraus_rank(map: &QuantumMap) -> Result<usize> {
    let cp = check_cp(map);
    if !cp.holds {
        return Err(Error::NotPositive {
            min_eigenvalue: cp.min_eigenvalue,
        });
    }
    let b = map.to_bform().into_matrix();
    Ok(herm_eig(&b.hermitian_part())?.rank())
}

/// Whether two operator sums define the same linear map, decided by comparing
/// their B forms.
pub fn same_map(a: &OperatorSumRep, b: &OperatorSumRep) -> Result<bool> {
    if (a.d_out(), a.d_in()) != (b.d_out(), b.d_in()) {
        return Err(Error::dims(format!(
            "maps {} -> {} and {} -> {} cannot be compared",
            a.d_in(),
            a.d_out(),
            b.d_in(),
            b.d_out()
        )));
    }
    let ba = QuantumMap::from(a.clone()).to_bform();
    let bb = QuantumMap::from(b.clone()).to_bform();
    Ok(ba.matrix().distance(bb.matrix()) <= tol::VERDICT)
}
