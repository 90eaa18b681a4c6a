use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, partial_trace, tensor_product, ComplexMatrix};
use crate::tol;

/// Initial system–environment state and one joint unitary per step.
///
/// The joint space is ordered `system ⊗ environment`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DilationEnvelope", into = "DilationEnvelope")]
pub struct Dilation {
    d_s: usize,
    d_e: usize,
    initial_se: ComplexMatrix,
    unitaries: Vec<ComplexMatrix>,
}

/// On-disk form of a [`Dilation`], before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationEnvelope {
    pub d_s: usize,
    pub d_e: usize,
    pub initial_se: ComplexMatrix,
    pub unitaries: Vec<ComplexMatrix>,
}

impl TryFrom<DilationEnvelope> for Dilation {
    type Error = Error;

    fn try_from(r: DilationEnvelope) -> Result<Self> {
        Dilation::new(r.d_s, r.d_e, r.initial_se, r.unitaries)
    }
}

impl From<Dilation> for DilationEnvelope {
    fn from(d: Dilation) -> Self {
        DilationEnvelope {
            d_s: d.d_s,
            d_e: d.d_e,
            initial_se: d.initial_se,
            unitaries: d.unitaries,
        }
    }
}

/// Checks that `rho` is a density operator within the verdict tolerance.
pub(crate) fn validate_state(rho: &ComplexMatrix, what: &str) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::dims(format!("{what} must be square")));
    }
    let defect = rho.hermiticity_defect();
    if defect > tol::VERDICT {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let e = herm_eig(&rho.hermitian_part())?;
    let min = e.min_eigenvalue();
    if min < -tol::VERDICT {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol::VERDICT || tr.im.abs() > tol::VERDICT {
        return Err(Error::invariant(format!("{what} has trace {tr}")));
    }
    Ok(())
}

/// `‖U†U − 1‖_F`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    u.adjoint()
        .matmul(u)
        .distance(&ComplexMatrix::identity(u.rows()))
}

pub(crate) fn validate_unitary(u: &ComplexMatrix, dim: usize) -> Result<()> {
    if u.shape() != (dim, dim) {
        return Err(Error::dims(format!(
            "unitary must be {dim}x{dim}, got {:?}",
            u.shape()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > tol::VERDICT {
        return Err(Error::invariant(format!(
            "matrix is not unitary (defect {defect:.3e})"
        )));
    }
    Ok(())
}

impl Dilation {
    pub fn new(
        d_s: usize,
        d_e: usize,
        initial_se: ComplexMatrix,
        unitaries: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if d_s == 0 || d_e == 0 {
            return Err(Error::dims(
                "system and environment dimensions must be positive",
            ));
        }
        let n = d_s * d_e;
        if initial_se.shape() != (n, n) {
            return Err(Error::dims(format!(
                "initial state must be {n}x{n} for d_s = {d_s}, d_e = {d_e}"
            )));
        }
        validate_state(&initial_se, "initial system-environment state")?;
        if unitaries.is_empty() {
            return Err(Error::param("a dilation needs at least one unitary"));
        }
        for u in &unitaries {
            validate_unitary(u, n)?;
        }
        Ok(Dilation {
            d_s,
            d_e,
            initial_se,
            unitaries,
        })
    }

    /// Dilation with the uncorrelated initial state `ρ_s ⊗ τ_e`.
    pub fn product(
        rho_s: &ComplexMatrix,
        tau_e: &ComplexMatrix,
        unitaries: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        Self::new(
            rho_s.rows(),
            tau_e.rows(),
            tensor_product(rho_s, tau_e),
            unitaries,
        )
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    /// Number of steps.
    pub fn k(&self) -> usize {
        self.unitaries.len()
    }

    pub fn initial_se(&self) -> &ComplexMatrix {
        &self.initial_se
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// `tr_e ρ_se`.
    pub fn initial_system_state(&self) -> ComplexMatrix {
        partial_trace(&self.initial_se, &[self.d_s, self.d_e], &[0]).expect("dimensions validated")
    }

    /// `tr_s ρ_se`.
    pub fn initial_environment_state(&self) -> ComplexMatrix {
        partial_trace(&self.initial_se, &[self.d_s, self.d_e], &[1]).expect("dimensions validated")
    }

    /// Whether `ρ_se` equals the product of its marginals within `tol`
    /// (Frobenius norm).
    pub fn is_product(&self, tol: f64) -> bool {
        let prod = tensor_product(
            &self.initial_system_state(),
            &self.initial_environment_state(),
        );
        prod.distance(&self.initial_se) <= tol
    }

    /// The same dynamics cut after the first `k` steps.
    pub fn truncated(&self, k: usize) -> Result<Dilation> {
        if k == 0 || k > self.k() {
            return Err(Error::param(format!(
                "cannot truncate a {}-step dilation to {k} steps",
                self.k()
            )));
        }
        Ok(Dilation {
            unitaries: self.unitaries[..k].to_vec(),
            ..self.clone()
        })
    }
}
