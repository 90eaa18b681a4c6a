//! Dense complex linear algebra kernel.
//!
//! All values are immutable and all operations are pure, so everything here is
//! `Send + Sync` and may be called concurrently.

mod eig;
mod functions;
mod matrix;
mod subsystems;

pub(crate) use eig::orthonormalize_against;
pub use eig::{herm_eig, svd, HermEigResult, SvdResult};
pub use functions::{inv_sqrtm, logm, matrix_function, relative_entropy, sqrtm, trace_distance};
pub use matrix::{c, ComplexMatrix, C64, I, ONE, ZERO};
pub use subsystems::{
    conjugate_trailing, partial_trace, permute_subsystems, reshuffle, tensor_all, tensor_product,
    unvec, vec,
};
