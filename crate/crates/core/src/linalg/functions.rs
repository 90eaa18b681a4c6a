//! Spectral matrix functions and distances between states.

use super::eig::herm_eig;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol;

/// `V · diag(f(λ)) · V†` for Hermitian `m`.
pub fn matrix_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(herm_eig(m)?.reconstruct_with(f))
}

/// Positive square root. Eigenvalues in `[−1e-9, 0)` are clamped to zero.
pub fn sqrtm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = herm_eig(m)?;
    let min = e.min_eigenvalue();
    if min < -tol::SQRT_NEGATIVE {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(e.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Inverse square root restricted to the support of `m`.
pub fn inv_sqrtm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = herm_eig(m)?;
    let min = e.min_eigenvalue();
    if min < -tol::SQRT_NEGATIVE {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(e.reconstruct_with(|l| {
        if l > tol::SUPPORT {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    }))
}

/// Natural logarithm on the support of `m`; eigenvalues with |λ| below the
/// support threshold map to zero.
pub fn logm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = herm_eig(m)?;
    let min = e.min_eigenvalue();
    if min < -tol::SUPPORT {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(e.reconstruct_with(|l| if l > tol::SUPPORT { l.ln() } else { 0.0 }))
}

/// Trace distance `½ Σ |λ_i(a − b)|`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dims(format!(
            "trace distance between {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let diff = a - b;
    let e = herm_eig(&diff)?;
    Ok(0.5 * e.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// Quantum relative entropy `S(a‖b) = tr a(ln a − ln b)` in nats.
///
/// Returns `+∞` when the support of `a` is not contained in the support of `b`.
pub fn relative_entropy(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::dims(format!(
            "relative entropy between {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let ea = herm_eig(a)?;
    let eb = herm_eig(b)?;
    for e in [&ea, &eb] {
        let min = e.min_eigenvalue();
        if min < -tol::VERDICT {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let tr: f64 = e.eigenvalues.iter().sum();
        if (tr - 1.0).abs() > tol::UNIT_TRACE {
            return Err(Error::param(format!(
                "relative entropy expects unit trace, got {tr}"
            )));
        }
    }

    let n = a.rows();
    let mut entropy_term = 0.0;
    for &l in &ea.eigenvalues {
        if l > tol::SUPPORT {
            entropy_term += l * l.ln();
        }
    }

    // Σ_ij λ_i |⟨a_i|b_j⟩|² ln μ_j, with support leakage accumulated separately.
    let mut cross = 0.0;
    let mut leaked = 0.0;
    for (j, &mu) in eb.eigenvalues.iter().enumerate() {
        let mut weight = 0.0;
        for (i, &l) in ea.eigenvalues.iter().enumerate() {
            if l <= tol::SUPPORT {
                continue;
            }
            let mut overlap = num_complex::Complex64::new(0.0, 0.0);
            for r in 0..n {
                overlap += ea.eigenvectors[(r, i)].conj() * eb.eigenvectors[(r, j)];
            }
            weight += l * overlap.norm_sqr();
        }
        if mu > tol::SUPPORT {
            cross += weight * mu.ln();
        } else {
            leaked += weight;
        }
    }
    if leaked > tol::SUPPORT {
        return Ok(f64::INFINITY);
    }
    Ok(entropy_term - cross)
}
