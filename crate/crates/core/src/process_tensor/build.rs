use super::{check_resource, ProcessTensor, MAX_WORKING_DIM};
use crate::channels::Dilation;
use crate::error::{Error, Result};
use crate::linalg::{
    conjugate_trailing, partial_trace, permute_subsystems, tensor_product, vec, ComplexMatrix,
};

/// `|I⟩⟨I|` with `|I⟩ = Σ_k |kk⟩`.
pub(crate) fn max_entangled(d: usize) -> ComplexMatrix {
    let v = vec(&ComplexMatrix::identity(d));
    ComplexMatrix::outer(&v, &v)
}

/// Choi state of the process generated by a dilation.
///
/// Starting from `ρ_se`, each step keeps the current system as the leg
/// `out_j`, hands the joint unitary one half of a fresh `|I⟩⟨I|` (the other
/// half becomes `in_j`), and applies `U_j` to that half and the environment.
/// The environment is traced at the end and the legs are put in canonical
/// order.
pub fn build_process_tensor(dilation: &Dilation) -> Result<ProcessTensor> {
    let (d, d_e, k) = (dilation.d_s(), dilation.d_e(), dilation.k());
    let choi_dim = check_resource(k, d)?;
    if choi_dim * d_e > MAX_WORKING_DIM {
        return Err(Error::ResourceBound(format!(
            "dilated working space {} exceeds {MAX_WORKING_DIM}",
            choi_dim * d_e
        )));
    }
    let pair = max_entangled(d);
    let mut x = dilation.initial_se().clone();
    for (j, u) in dilation.unitaries().iter().enumerate() {
        let m = 2 * j + 1;
        let mut dims = vec![d; m];
        dims.extend([d_e, d, d]);
        let grown = tensor_product(&x, &pair);
        let mut perm: Vec<usize> = (0..m).collect();
        perm.extend([m + 1, m + 2, m]);
        let reordered = permute_subsystems(&grown, &dims, &perm)?;
        x = conjugate_trailing(&reordered, u);
    }
    let legs = 2 * k + 1;
    let mut dims = vec![d; legs];
    dims.push(d_e);
    let reduced = partial_trace(&x, &dims, &(0..legs).collect::<Vec<_>>())?;
    let reversed: Vec<usize> = (0..legs).rev().collect();
    let choi = permute_subsystems(&reduced, &vec![d; legs], &reversed)?;
    Ok(ProcessTensor::from_choi_unchecked(k, d, choi))
}
