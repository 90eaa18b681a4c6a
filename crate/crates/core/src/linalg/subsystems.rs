//! Tensor products, partial traces, subsystem permutations, vectorization and
//! reshuffling.
//!
//! Multi-index conventions are big-endian: for subsystems with dimensions
//! `[d_0, d_1, …]` the flat index is `((i_0·d_1 + i_1)·d_2 + i_2)…`, so that
//! `|r⟩⟨s| ⊗ |r′⟩⟨s′| = |r r′⟩⟨s s′|`.

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for r in 0..ar {
        for s in 0..ac {
            let x = a[(r, s)];
            if x == ZERO {
                continue;
            }
            for rp in 0..br {
                for sp in 0..bc {
                    out[(r * br + rp, s * bc + sp)] = x * b[(rp, sp)];
                }
            }
        }
    }
    out
}

/// Left-to-right Kronecker product of a list of matrices.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(None, |acc: Option<ComplexMatrix>, m| {
            Some(match acc {
                None => m.clone(),
                Some(a) => tensor_product(&a, m),
            })
        })
        .expect("tensor_all needs at least one factor")
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat offsets (in the full space) of every multi-index over `subsystems`.
fn offsets(dims: &[usize], strides: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &sys in subsystems {
        let mut next = Vec::with_capacity(out.len() * dims[sys]);
        for &base in &out {
            for i in 0..dims[sys] {
                next.push(base + i * strides[sys]);
            }
        }
        out = next;
    }
    out
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(Error::dims("subsystem operation on a non-square matrix"));
    }
    if dims.contains(&0) {
        return Err(Error::dims("zero subsystem dimension"));
    }
    let total: usize = dims.iter().product();
    if total != m.rows() {
        return Err(Error::dims(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Reduced matrix on the subsystems listed in `keep` (in their original order).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::dims(format!(
            "subsystem index out of range in {keep:?}"
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let st = strides(dims);
    let kept_off = offsets(dims, &st, &keep);
    let traced_off = offsets(dims, &st, &traced);
    let n = kept_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &ri) in kept_off.iter().enumerate() {
        for (j, &cj) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m[(ri + t, cj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Reorders tensor factors: subsystem `i` of the result is subsystem `perm[i]`
/// of the input.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len()
        || perm
            .iter()
            .any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::dims(format!(
            "{perm:?} is not a permutation of {} subsystems",
            dims.len()
        )));
    }
    let st = strides(dims);
    let off = offsets(dims, &st, perm);
    let n = m.rows();
    let src = m.data();
    let mut data = Vec::with_capacity(n * n);
    for &ri in &off {
        let row = &src[ri * n..(ri + 1) * n];
        data.extend(off.iter().map(|&cj| row[cj]));
    }
    Ok(ComplexMatrix::from_vec_unchecked(n, n, data))
}

/// Row-major vectorization: `vec(ρ)[r·cols + s] = ρ_rs`.
pub fn vec(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::column(m.data().to_vec())
}

/// Inverse of [`vec`].
pub fn unvec(v: &ComplexMatrix, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.cols() != 1 || v.rows() != rows * cols {
        return Err(Error::dims(format!(
            "cannot unvec a {}x{} array into {rows}x{cols}",
            v.rows(),
            v.cols()
        )));
    }
    ComplexMatrix::new(rows, cols, v.data().to_vec())
}

/// Exchanges the A form and the B form of a map with the given output and
/// input dimensions, via `A[(r s),(r′ s′)] = B[(r r′),(s s′)]`.
///
/// The direction is inferred from the shape: `(d_out·d_in)²` is read as a B
/// form, `d_out² × d_in²` as an A form. For `d_out = d_in` the two coincide and
/// the permutation is an involution.
pub fn reshuffle(m: &ComplexMatrix, d_out: usize, d_in: usize) -> Result<ComplexMatrix> {
    let (rows, cols) = m.shape();
    let b_shape = (d_out * d_in, d_out * d_in);
    let a_shape = (d_out * d_out, d_in * d_in);
    if (rows, cols) == b_shape {
        Ok(ComplexMatrix::from_fn(
            d_out * d_out,
            d_in * d_in,
            |rs, rpsp| {
                let (r, s) = (rs / d_out, rs % d_out);
                let (rp, sp) = (rpsp / d_in, rpsp % d_in);
                m[(r * d_in + rp, s * d_in + sp)]
            },
        ))
    } else if (rows, cols) == a_shape {
        Ok(ComplexMatrix::from_fn(
            d_out * d_in,
            d_out * d_in,
            |rrp, ssp| {
                let (r, rp) = (rrp / d_in, rrp % d_in);
                let (s, sp) = (ssp / d_in, ssp % d_in);
                m[(r * d_out + s, rp * d_in + sp)]
            },
        ))
    } else {
        Err(Error::dims(format!(
            "{rows}x{cols} matrix does not factor as a map {d_in} -> {d_out}"
        )))
    }
}

/// `(1 ⊗ U) X (1 ⊗ U†)` where `U` acts on the trailing factor of dimension
/// `u.rows()`.
pub fn conjugate_trailing(x: &ComplexMatrix, u: &ComplexMatrix) -> ComplexMatrix {
    let n = x.rows();
    let du = u.rows();
    assert!(
        u.is_square() && x.is_square() && n.is_multiple_of(du),
        "trailing factor mismatch"
    );
    let blocks = n / du;
    // Left multiplication: rows grouped in blocks of du.
    let mut left = ComplexMatrix::zeros(n, n);
    for b in 0..blocks {
        for i in 0..du {
            for k in 0..du {
                let uik = u[(i, k)];
                if uik == ZERO {
                    continue;
                }
                let src = b * du + k;
                let dst = b * du + i;
                for col in 0..n {
                    left[(dst, col)] += uik * x[(src, col)];
                }
            }
        }
    }
    // Right multiplication by (1 ⊗ U†): out[r, b·du + j] = Σ_k left[r, b·du + k] conj(U[j,k]).
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for b in 0..blocks {
            for j in 0..du {
                let mut acc = ZERO;
                for k in 0..du {
                    acc += left[(r, b * du + k)] * u[(j, k)].conj();
                }
                out[(r, b * du + j)] = acc;
            }
        }
    }
    out
}
