use super::build::max_entangled;
use crate::channels::validate_unitary;
use crate::error::{Error, Result};
use crate::linalg::{
    conjugate_trailing, herm_eig, partial_trace, permute_subsystems, tensor_all, tensor_product,
    ComplexMatrix,
};
use crate::superchannel::ControlOperation;
use crate::tol;

/// Operations fed into a `k`-step process.
#[derive(Clone, Debug, PartialEq)]
pub enum OperationSequence {
    /// Independent operations in time order: `ops[j]` acts at `t_j`.
    Product(Vec<ControlOperation>),
    /// A possibly correlated sequence given by one B form on the legs
    /// `op_out_{k-1}, op_in_{k-1}, ..., op_out_0, op_in_0`.
    Joint {
        k: usize,
        d: usize,
        bform: ComplexMatrix,
    },
}

impl OperationSequence {
    pub fn product(ops: Vec<ControlOperation>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::param("a sequence needs at least one operation"))?;
        let d = first.d();
        if ops.iter().any(|op| op.d() != d) {
            return Err(Error::dims(
                "all operations in a sequence must act on the same dimension",
            ));
        }
        Ok(OperationSequence::Product(ops))
    }

    /// The identity operation at every step.
    pub fn identity(d: usize, k: usize) -> Self {
        OperationSequence::Product(vec![ControlOperation::identity(d); k])
    }

    /// Validates that `bform` is a positive operator of the right size.
    pub fn joint(k: usize, d: usize, bform: ComplexMatrix) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("a sequence needs at least one step"));
        }
        let n = d.pow(2 * k as u32);
        if bform.shape() != (n, n) {
            return Err(Error::dims(format!(
                "joint B form must be {n}x{n}, got {:?}",
                bform.shape()
            )));
        }
        let defect = bform.hermiticity_defect();
        if defect > tol::VERDICT {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let min = herm_eig(&bform.hermitian_part())?.min_eigenvalue();
        if min < -tol::VERDICT {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(OperationSequence::Joint { k, d, bform })
    }

    /// Correlated sequence implemented by an ancilla memory: the ancilla starts
    /// in `ancilla`, and at step `j` the unitary `couplings[j]` acts on
    /// `system ⊗ ancilla`. The ancilla is discarded at the end.
    pub fn ancilla_protocol(
        d: usize,
        ancilla: &ComplexMatrix,
        couplings: &[ComplexMatrix],
    ) -> Result<Self> {
        crate::channels::validate_state(ancilla, "ancilla state")?;
        let d_a = ancilla.rows();
        let k = couplings.len();
        if k == 0 {
            return Err(Error::param("a sequence needs at least one step"));
        }
        for w in couplings {
            validate_unitary(w, d * d_a)?;
        }
        let pair = max_entangled(d);
        // Legs: (op_in_0, op_out_0, ..., op_in_{j-1}, op_out_{j-1}, a).
        let mut x = ancilla.clone();
        for (j, w) in couplings.iter().enumerate() {
            let m = 2 * j;
            let mut dims = vec![d; m];
            dims.extend([d_a, d, d]);
            let grown = tensor_product(&x, &pair);
            let mut perm: Vec<usize> = (0..m).collect();
            perm.extend([m + 1, m + 2, m]);
            let reordered = permute_subsystems(&grown, &dims, &perm)?;
            x = conjugate_trailing(&reordered, w);
        }
        let legs = 2 * k;
        let mut dims = vec![d; legs];
        dims.push(d_a);
        let reduced = partial_trace(&x, &dims, &(0..legs).collect::<Vec<_>>())?;
        let reversed: Vec<usize> = (0..legs).rev().collect();
        let bform = permute_subsystems(&reduced, &vec![d; legs], &reversed)?;
        Ok(OperationSequence::Joint { k, d, bform })
    }

    pub fn k(&self) -> usize {
        match self {
            OperationSequence::Product(ops) => ops.len(),
            OperationSequence::Joint { k, .. } => *k,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            OperationSequence::Product(ops) => ops[0].d(),
            OperationSequence::Joint { d, .. } => *d,
        }
    }

    /// Joint B form `A_{k-1} ⊗ ⋯ ⊗ A_0`, or the stored correlated B form.
    pub fn joint_bform(&self) -> ComplexMatrix {
        match self {
            OperationSequence::Product(ops) => tensor_all(ops.iter().rev().map(|op| op.bform())),
            OperationSequence::Joint { bform, .. } => bform.clone(),
        }
    }
}
