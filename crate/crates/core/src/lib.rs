//! Quantum maps, superchannels and multi-time process tensors.
//!
//! The crate covers the four representations of a linear map on operator
//! space and the conversions between them, Stinespring dilations, the
//! superchannel for correlated initial states, process tensors built from
//! dilated dynamics, simulated process tomography and a non-Markovianity
//! measure based on the distance to the Markov product.
//!
//! Conventions used throughout: matrices are row-major, `vec` stacks rows,
//! composite indices are big-endian, and Choi matrices (B forms) carry the
//! output leg before the input leg with `|I⟩ = Σ_k |kk⟩` unnormalized.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod process_tensor;
pub mod random;
pub mod superchannel;
pub mod tol;
pub mod tomography;

pub use channels::{
    channel_from_dilation, standard_channel, stinespring_dilate, Dilation, StandardChannel,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use maps::{
    check_cp, check_hp, check_tp, dual_basis, kraus_rank, same_map, AForm, BForm, OperatorSumRep,
    QuantumMap, Representation, RepresentationKind, TomographicRep,
};
pub use process_tensor::{
    build_process_tensor, chi_decomposition, is_markov, non_markovianity, surprise, Distance,
    OperationSequence, ProcessTensor,
};
pub use superchannel::{
    apply_superchannel, build_superchannel, superchannel_kraus, ControlOperation, Superchannel,
    TraceClass,
};
