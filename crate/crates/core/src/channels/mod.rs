//! Standard channels, common gates and Stinespring dilations in both
//! directions.

mod dilation;
pub mod gates;

pub use dilation::{unitarity_defect, Dilation, DilationEnvelope};
pub(crate) use dilation::{validate_state, validate_unitary};

use crate::error::{Error, Result};
use crate::linalg::{c, herm_eig, orthonormalize_against, tensor_product, ComplexMatrix, ZERO};
use crate::maps::{check_cp, check_tp, QuantumMap};
use crate::tol;

/// Parametrized families of CPTP maps, all produced in Kraus form by
/// [`standard_channel`].
#[derive(Clone, Debug, PartialEq)]
pub enum StandardChannel {
    Unitary(ComplexMatrix),
    /// `ρ ↦ (1 − p) ρ + p tr(ρ) 1/d`.
    Depolarizing {
        d: usize,
        p: f64,
    },
    /// Qubit decay `|1⟩ → |0⟩` with probability `γ`.
    AmplitudeDamping {
        gamma: f64,
    },
    /// `ρ ↦ (1 − p) ρ + p XρX`.
    BitFlip {
        p: f64,
    },
    /// `ρ ↦ (1 − p) ρ + p ZρZ`.
    PhaseFlip {
        p: f64,
    },
    /// Measure in the computational basis and prepare `states[k]` on outcome `k`.
    MeasurePrepare {
        states: Vec<ComplexMatrix>,
    },
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// Builds the requested channel as a Kraus map. Operators with zero weight are
/// omitted.
pub fn standard_channel(kind: &StandardChannel) -> Result<QuantumMap> {
    let ops = match kind {
        StandardChannel::Unitary(u) => {
            validate_unitary(u, u.rows())?;
            vec![u.clone()]
        }
        StandardChannel::Depolarizing { d, p } => {
            check_probability("p", *p)?;
            if *d < 2 {
                return Err(Error::param("depolarizing channel needs d >= 2"));
            }
            let d2 = (d * d) as f64;
            let mut ops = vec![ComplexMatrix::identity(*d).scale_real((1.0 - p + p / d2).sqrt())];
            if *p > 0.0 {
                let w = (p / d2).sqrt();
                for a in 0..*d {
                    for b in 0..*d {
                        if a + b > 0 {
                            ops.push(gates::weyl(*d, a, b).scale_real(w));
                        }
                    }
                }
            }
            ops
        }
        StandardChannel::AmplitudeDamping { gamma } => {
            check_probability("gamma", *gamma)?;
            let mut ops = vec![ComplexMatrix::diag_real(&[1.0, (1.0 - gamma).sqrt()])];
            if *gamma > 0.0 {
                ops.push(ComplexMatrix::from_real_rows(&[
                    &[0.0, gamma.sqrt()],
                    &[0.0, 0.0],
                ]));
            }
            ops
        }
        StandardChannel::BitFlip { p } | StandardChannel::PhaseFlip { p } => {
            check_probability("p", *p)?;
            let flip = if matches!(kind, StandardChannel::BitFlip { .. }) {
                gates::x()
            } else {
                gates::z()
            };
            let mut ops = Vec::new();
            if *p < 1.0 {
                ops.push(ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()));
            }
            if *p > 0.0 {
                ops.push(flip.scale_real(p.sqrt()));
            }
            ops
        }
        StandardChannel::MeasurePrepare { states } => {
            let d_in = states.len();
            let first = states
                .first()
                .ok_or_else(|| Error::param("measure-and-prepare needs states"))?;
            let d_out = first.rows();
            let mut ops = Vec::new();
            for (k, sigma) in states.iter().enumerate() {
                if sigma.shape() != (d_out, d_out) {
                    return Err(Error::dims("prepared states must share one dimension"));
                }
                validate_state(sigma, "prepared state")?;
                let e = herm_eig(&sigma.hermitian_part())?;
                let bra = ComplexMatrix::ket(d_in, k).adjoint();
                for (j, &lambda) in e.eigenvalues.iter().enumerate() {
                    if lambda > tol::INITIAL_STATE_CUTOFF {
                        let ket = e.eigenvectors.column_at(j).scale_real(lambda.sqrt());
                        ops.push(ket.matmul(&bra));
                    }
                }
            }
            ops
        }
    };
    QuantumMap::from_kraus(ops)
}

/// Reduced dynamics `ρ ↦ tr_e[U (ρ ⊗ τ_e) U†]`.
///
/// With `τ_e = Σ_x p_x |x⟩⟨x|` the Kraus operators are
/// `K_{εx} = √p_x (1 ⊗ ⟨ε|) U (1 ⊗ |x⟩)`.
pub fn channel_from_dilation(tau_e: &ComplexMatrix, u: &ComplexMatrix) -> Result<QuantumMap> {
    validate_state(tau_e, "environment state")?;
    let d_e = tau_e.rows();
    if !u.rows().is_multiple_of(d_e) {
        return Err(Error::dims(format!(
            "unitary of size {} does not factor over an environment of size {d_e}",
            u.rows()
        )));
    }
    let d_s = u.rows() / d_e;
    validate_unitary(u, d_s * d_e)?;
    let e = herm_eig(&tau_e.hermitian_part())?;
    let mut ops = Vec::new();
    for (x, &p) in e.eigenvalues.iter().enumerate() {
        if p <= tol::INITIAL_STATE_CUTOFF {
            continue;
        }
        let amp = p.sqrt();
        let ket = e.eigenvectors.column_at(x);
        for eps in 0..d_e {
            ops.push(ComplexMatrix::from_fn(d_s, d_s, |a, b| {
                let mut acc = ZERO;
                for f in 0..d_e {
                    acc += u[(a * d_e + eps, b * d_e + f)] * ket[(f, 0)];
                }
                acc * amp
            }));
        }
    }
    QuantumMap::from_kraus(ops)
}

/// Stinespring dilation of a CPTP map on a `d`-dimensional system.
///
/// The canonical Kraus operators define the isometry `V = Σ_α K_α ⊗ |α⟩_e`
/// on an environment of dimension `max(kraus_rank, 2)`. `V` fills the columns
/// of `U` that act on `|j⟩ ⊗ |0⟩_e`; the remaining columns are obtained by
/// Gram–Schmidt over the standard basis in index order. The environment
/// starts in `|0⟩⟨0|` and the system slot of the returned initial state holds
/// the maximally mixed state.
pub fn stinespring_dilate(map: &QuantumMap) -> Result<Dilation> {
    let d = map.d_in();
    if map.d_out() != d {
        return Err(Error::dims(format!(
            "Stinespring dilation needs equal input and output dimensions, got {} -> {}",
            d,
            map.d_out()
        )));
    }
    let cp = check_cp(map);
    if !cp.holds {
        return Err(Error::NotPositive {
            min_eigenvalue: cp.min_eigenvalue,
        });
    }
    let tp = check_tp(map);
    if !tp.holds {
        return Err(Error::invariant(format!(
            "map is not trace preserving (residual {:.3e})",
            tp.residual
        )));
    }
    let kraus: Vec<ComplexMatrix> = QuantumMap::from(map.to_bform())
        .to_operator_sum()
        .left()
        .to_vec();
    let d_e = kraus.len().max(2);
    let n = d * d_e;

    let mut u = ComplexMatrix::zeros(n, n);
    let mut filled = vec![false; n];
    let mut columns = Vec::with_capacity(n);
    for j in 0..d {
        let mut col = ComplexMatrix::from_fn(n, 1, |row, _| {
            let (i, alpha) = (row / d_e, row % d_e);
            kraus.get(alpha).map_or(ZERO, |k| k[(i, j)])
        });
        // V is an isometry for TP maps; re-orthonormalize to absorb rounding.
        orthonormalize_against(&mut col, &columns);
        u.set_column(j * d_e, &col);
        filled[j * d_e] = true;
        columns.push(col);
    }
    let mut candidates = 0..n;
    for (idx, done) in filled.iter().enumerate() {
        if *done {
            continue;
        }
        loop {
            let k = candidates
                .next()
                .ok_or_else(|| Error::invariant("isometry completion ran out of candidates"))?;
            let mut cand = ComplexMatrix::ket(n, k);
            if orthonormalize_against(&mut cand, &columns) {
                u.set_column(idx, &cand);
                columns.push(cand);
                break;
            }
        }
    }

    let rho_s = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    let tau_e = ComplexMatrix::projector(&ComplexMatrix::ket(d_e, 0));
    Dilation::product(&rho_s, &tau_e, vec![u])
}

/// Dilation in which step `j` couples the system to its own fresh copy of
/// `tau`: the environment is `e_1 ⊗ ⋯ ⊗ e_k`, initially `τ^{⊗k}`, and the
/// `j`-th joint unitary acts as `step_unitaries[j]` on `s ⊗ e_{j+1}` and
/// trivially elsewhere. The resulting process is Markovian.
pub fn fresh_environment_dilation(
    rho_s: &ComplexMatrix,
    tau: &ComplexMatrix,
    step_unitaries: &[ComplexMatrix],
) -> Result<Dilation> {
    let (d, d_t, k) = (rho_s.rows(), tau.rows(), step_unitaries.len());
    if k == 0 {
        return Err(Error::param("a dilation needs at least one step"));
    }
    for u in step_unitaries {
        validate_unitary(u, d * d_t)?;
    }
    let d_e = d_t.pow(k as u32);
    let mut env = tau.clone();
    for _ in 1..k {
        env = tensor_product(&env, tau);
    }
    let unitaries = step_unitaries
        .iter()
        .enumerate()
        .map(|(j, u)| {
            // Stride of factor e_{j+1} inside the environment index.
            let stride = d_t.pow((k - 1 - j) as u32);
            ComplexMatrix::from_fn(d * d_e, d * d_e, |row, col| {
                let (a, ea) = (row / d_e, row % d_e);
                let (b, eb) = (col / d_e, col % d_e);
                let (fa, fb) = ((ea / stride) % d_t, (eb / stride) % d_t);
                if ea - fa * stride != eb - fb * stride {
                    return ZERO;
                }
                u[(a * d_t + fa, b * d_t + fb)]
            })
        })
        .collect();
    Dilation::product(rho_s, &env, unitaries)
}

/// Embeds a pure environment state as a projector, handy for building product
/// dilations.
pub fn pure_state(amplitudes: &[(f64, f64)]) -> ComplexMatrix {
    let v = ComplexMatrix::column(amplitudes.iter().map(|&(re, im)| c(re, im)).collect());
    let norm = v.frobenius_norm();
    ComplexMatrix::projector(&v.scale_real(1.0 / norm))
}

/// `ρ_s ⊗ τ_e` evolved by one joint unitary and reduced to the system.
pub fn evolve_reduced(
    rho_s: &ComplexMatrix,
    tau_e: &ComplexMatrix,
    u: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let joint = u.sandwich(&tensor_product(rho_s, tau_e));
    crate::linalg::partial_trace(&joint, &[rho_s.rows(), tau_e.rows()], &[0])
}
