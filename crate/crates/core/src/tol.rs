//! Numerical thresholds shared across the crate.

/// Verdict tolerance for TP/HP/CP checks and other structural identities.
pub const VERDICT: f64 = 1e-9;

/// Eigenvalues with modulus below this count as zero (rank, log, support).
pub const SUPPORT: f64 = 1e-10;

/// Maximum `‖m − m†‖_F` accepted by the Hermitian eigensolver.
pub const HERMITIAN_INPUT: f64 = 1e-10;

/// Largest eigenvalue violation accepted before a square root is refused.
pub const SQRT_NEGATIVE: f64 = 1e-9;

/// Unit-trace tolerance for relative-entropy inputs.
pub const UNIT_TRACE: f64 = 1e-8;

/// Relative singular value gate for linear independence of a basis.
pub const INDEPENDENCE: f64 = 1e-8;

/// Duality residual `tr(D_i† ρ_j) − δ_ij` accepted for tomographic data.
pub const DUALITY: f64 = 1e-10;

/// Initial-state eigenvalues below this are dropped from Kraus constructions.
pub const INITIAL_STATE_CUTOFF: f64 = 1e-12;
