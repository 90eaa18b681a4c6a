//! Hermitian eigendecomposition (cyclic Jacobi) and the SVD built on it.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermEigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    /// V · diag(f(λ)) · V†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let a = v[(r, k)] * w;
                if a == ZERO {
                    continue;
                }
                for s in 0..n {
                    out[(r, s)] += a * v[(s, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Number of eigenvalues with |λ| above the support threshold.
    pub fn rank(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|l| l.abs() > tol::SUPPORT)
            .count()
    }
}

/// Thin SVD `m = U · diag(σ) · V†` with σ descending.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (r, c) = (self.u.rows(), self.v.rows());
        let mut out = ComplexMatrix::zeros(r, c);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..r {
                let a = self.u[(i, k)] * s;
                for j in 0..c {
                    out[(i, j)] += a * self.v[(j, k)].conj();
                }
            }
        }
        out
    }
}

const JACOBI_OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] when `‖m − m†‖_F > 1e-10`. Only the
/// Hermitian part of `m` is diagonalized.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEigResult> {
    if !m.is_square() {
        return Err(Error::dims("eigendecomposition of a non-square matrix"));
    }
    let deviation = m.hermiticity_defect();
    if deviation > tol::HERMITIAN_INPUT {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(&m.hermitian_part()))
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a[p * n + q].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(m: &ComplexMatrix) -> HermEigResult {
    let n = m.rows();
    let mut a: Vec<C64> = m.data().to_vec();
    let mut v = ComplexMatrix::identity(n).into_data();
    // Off-diagonal threshold relative to max(‖m‖_F, 1).
    let threshold = JACOBI_OFF_TOL * m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let gabs = g.norm();
                if gabs < 1e-300 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = g / gabs;
                let theta = (aqq - app) / (2.0 * gabs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let jpp = C64::new(cs, 0.0);
                let jpq = C64::new(sn, 0.0);
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * jpp + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * jpp + vkq * jqp;
                    v[k * n + q] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].re.total_cmp(&a[x * n + x].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, k| v[r * n + order[k]]);
    HermEigResult {
        eigenvalues,
        eigenvectors,
    }
}

/// Singular value decomposition via the eigendecompositions of `m†m` and `m·m†`.
///
/// Left vectors for non-negligible singular values come from `m·v = σ·u`; any
/// remaining left vectors are drawn from the eigenvectors of `m·m†` and
/// orthonormalized against those already found.
pub fn svd(m: &ComplexMatrix) -> SvdResult {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let right = jacobi(&m.adjoint().matmul(m).hermitian_part());
    let sigma_max = right.eigenvalues[0].max(0.0).sqrt();
    let cutoff = 1e-12 * sigma_max.max(f64::MIN_POSITIVE);

    let mut u = ComplexMatrix::zeros(rows, k);
    let mut v = ComplexMatrix::zeros(cols, k);
    let mut singular_values = Vec::with_capacity(k);
    let mut found: Vec<ComplexMatrix> = Vec::with_capacity(k);
    let mut pending = Vec::new();

    for idx in 0..k {
        let s = right.eigenvalues[idx].max(0.0).sqrt();
        let vk = right.eigenvectors.column_at(idx);
        v.set_column(idx, &vk);
        singular_values.push(s);
        if s > cutoff {
            let mut uk = m.matmul(&vk).scale_real(1.0 / s);
            orthonormalize_against(&mut uk, &found);
            u.set_column(idx, &uk);
            found.push(uk);
        } else {
            pending.push(idx);
        }
    }

    if !pending.is_empty() {
        let left = jacobi(&m.matmul(&m.adjoint()).hermitian_part());
        let mut candidates = (0..rows).rev().map(|j| left.eigenvectors.column_at(j));
        for idx in pending {
            loop {
                let mut cand = candidates
                    .next()
                    .unwrap_or_else(|| ComplexMatrix::ket(rows, idx % rows));
                if orthonormalize_against(&mut cand, &found) {
                    u.set_column(idx, &cand);
                    found.push(cand);
                    break;
                }
            }
        }
    }

    SvdResult {
        singular_values,
        u,
        v,
    }
}

/// Gram–Schmidt step; returns false when the vector collapses.
pub(crate) fn orthonormalize_against(x: &mut ComplexMatrix, basis: &[ComplexMatrix]) -> bool {
    for _ in 0..2 {
        for b in basis {
            let proj = b.hs_inner(x);
            for i in 0..x.rows() {
                let bi = b[(i, 0)];
                x[(i, 0)] -= proj * bi;
            }
        }
    }
    let norm = x.frobenius_norm();
    if norm < 1e-10 {
        return false;
    }
    *x = x.scale_real(1.0 / norm);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::c;

    #[test]
    fn two_by_two_with_complex_offdiagonal() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0)],
            vec![c(1.0, 1.0), c(3.0, 0.0)],
        ]);
        let e = herm_eig(&m).unwrap();
        // tr = 5, det = 6 - 2 = 4 → λ = 4, 1
        assert!((e.eigenvalues[0] - 4.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-12);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn svd_of_rectangular_rank_deficient() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(2.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
        ]);
        let s = svd(&m);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(s.singular_values[1].abs() < 1e-7);
        let utu = s.u.adjoint().matmul(&s.u);
        assert!(utu.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
    }
}
