//! Operator bases and their Hilbert–Schmidt duals.

use crate::error::{Error, Result};
use crate::linalg::{c, svd, ComplexMatrix, C64, I, ONE, ZERO};
use crate::tol;

/// Hermitian self-dual basis `{Γ_j}` of `d×d` matrices with `tr(Γ_i Γ_j) = 2δ_ij`:
/// the generalized Gell-Mann matrices followed by `√(2/d)·1`.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = ONE;
            sym[(k, j)] = ONE;
            out.push(sym);
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = -I;
            anti[(k, j)] = I;
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![ZERO; d];
        for entry in diag.iter_mut().take(l) {
            *entry = c(norm, 0.0);
        }
        diag[l] = c(-(l as f64) * norm, 0.0);
        out.push(ComplexMatrix::diag(&diag));
    }
    out.push(ComplexMatrix::identity(d).scale_real((2.0 / d as f64).sqrt()));
    out
}

/// Pauli matrices `[I, X, Y, Z]`.
pub fn paulis() -> [ComplexMatrix; 4] {
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
    ]
}

/// Informationally complete set of `d²` pure states used as the default input
/// basis for state and process tomography.
///
/// For `d = 2` this is `{Π₊, Π₊ᵢ, Π₀, Π₋}`. For larger `d` it is the
/// rank-1 frame `{|k⟩} ∪ {(|j⟩+|k⟩)/√2} ∪ {(|j⟩+i|k⟩)/√2}` built from the
/// positive eigenvectors of the generalized Gell-Mann matrices.
pub fn state_basis(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d < 2 {
        return Err(Error::param("state basis needs d >= 2"));
    }
    if d == 2 {
        let h = 0.5;
        return Ok(vec![
            ComplexMatrix::from_real_rows(&[&[h, h], &[h, h]]),
            ComplexMatrix::from_rows(&[vec![c(h, 0.0), c(0.0, -h)], vec![c(0.0, h), c(h, 0.0)]]),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]),
            ComplexMatrix::from_real_rows(&[&[h, -h], &[-h, h]]),
        ]);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(ComplexMatrix::projector(&ComplexMatrix::ket(d, k)));
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut plus = vec![ZERO; d];
            plus[j] = c(s, 0.0);
            plus[k] = c(s, 0.0);
            out.push(ComplexMatrix::projector(&ComplexMatrix::column(plus)));
            let mut iplus = vec![ZERO; d];
            iplus[j] = c(s, 0.0);
            iplus[k] = c(0.0, s);
            out.push(ComplexMatrix::projector(&ComplexMatrix::column(iplus)));
        }
    }
    Ok(out)
}

/// Checks that `basis` holds `d²` linearly independent `d×d` matrices and
/// returns `d`.
pub fn check_basis(basis: &[ComplexMatrix]) -> Result<usize> {
    let first = basis.first().ok_or_else(|| Error::dims("empty basis"))?;
    let d = first.rows();
    if basis.iter().any(|m| m.shape() != (d, d)) {
        return Err(Error::dims(
            "basis elements must all be square of equal size",
        ));
    }
    if basis.len() != d * d {
        return Err(Error::dims(format!(
            "a basis of {d}x{d} matrices needs {} elements, got {}",
            d * d,
            basis.len()
        )));
    }
    let stacked = ComplexMatrix::from_fn(basis.len(), d * d, |i, k| basis[i].data()[k]);
    let s = svd(&stacked);
    let max = s.singular_values[0];
    let min = *s.singular_values.last().unwrap();
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    if ratio <= tol::INDEPENDENCE {
        return Err(Error::LinearlyDependent { ratio });
    }
    Ok(d)
}

/// Dual set `{D_i}` with `tr(D_i† ρ_j) = δ_ij`.
///
/// Each `ρ_i` is expanded as `Σ_j h_ij Γ_j` in the Gell-Mann basis; with
/// `F† = H⁻¹` the duals are `D_i = ½ Σ_j f_ij Γ_j`.
pub fn dual_basis(basis: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let d = check_basis(basis)?;
    let gamma = gell_mann_basis(d);
    let n = d * d;
    // h_ij = tr(Γ_j ρ_i) / 2; Γ_j is Hermitian so tr(Γ_j ρ_i) = ⟨Γ_j, ρ_i⟩_HS.
    let h = ComplexMatrix::from_fn(n, n, |i, j| gamma[j].hs_inner(&basis[i]) * 0.5);
    let f = h.inverse()?.adjoint();
    Ok((0..n)
        .map(|i| {
            let mut acc = ComplexMatrix::zeros(d, d);
            for (j, g) in gamma.iter().enumerate() {
                let fij: C64 = f[(i, j)];
                if fij != ZERO {
                    acc += &g.scale(fij * 0.5);
                }
            }
            acc
        })
        .collect())
}

/// Largest `|tr(D_i† ρ_j) − δ_ij|`.
pub fn duality_residual(basis: &[ComplexMatrix], duals: &[ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, d) in duals.iter().enumerate() {
        for (j, r) in basis.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((d.hs_inner(r) - target).norm());
        }
    }
    worst
}
