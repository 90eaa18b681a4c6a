#![allow(dead_code)]

use qmaps::channels::gates;
use qmaps::linalg::ComplexMatrix;
use qmaps::random;
use qmaps::{ControlOperation, Dilation, OperationSequence, TraceClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p0() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, 0.0])
}

pub fn p1() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[0.0, 1.0])
}

pub fn plus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
}

pub fn minus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]])
}

/// A qubit environment that persists across both steps and is swapped with
/// the system each time, starting from `|00⟩`.
pub fn swap_dilation() -> Dilation {
    Dilation::product(&p0(), &p0(), vec![gates::swap(2), gates::swap(2)]).unwrap()
}

pub fn random_sequence(
    d: usize,
    k: usize,
    class: TraceClass,
    rng: &mut ChaCha8Rng,
) -> OperationSequence {
    let ops: Vec<ControlOperation> = (0..k).map(|_| random::operation(d, class, rng)).collect();
    OperationSequence::product(ops).unwrap()
}
