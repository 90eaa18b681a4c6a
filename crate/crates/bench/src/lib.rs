//! Fixtures shared by the criterion benchmarks.

use qmaps::channels::gates;
use qmaps::linalg::ComplexMatrix;
use qmaps::{random, Dilation, QuantumMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Hermitian matrix of side `d`.
pub fn hermitian(d: usize, seed: u64) -> ComplexMatrix {
    random::hermitian(d, &mut rng(seed))
}

/// Random CPTP map on a `d`-dimensional system, in Kraus form.
pub fn cptp(d: usize, seed: u64) -> QuantumMap {
    random::cptp(d, d, &mut rng(seed))
}

/// Random correlated `k`-step dilation with qubit system and environment.
pub fn qubit_dilation(k: usize, seed: u64) -> Dilation {
    random::dilation(2, 2, k, false, &mut rng(seed))
}

/// Qubit system swapped with a qubit environment at each of `k` steps.
pub fn swap_dilation(k: usize) -> Dilation {
    let ground = ComplexMatrix::diag_real(&[1.0, 0.0]);
    Dilation::product(&ground, &ground, vec![gates::swap(2); k]).expect("swap dilation is valid")
}
