//! Tomography of a qubit that starts correlated with a qubit environment.
//!
//! The joint state is `|ψ⟩ = (μ|00⟩ + ν|11⟩)/√2` on system ⊗ environment and
//! the dynamics is a CNOT with the environment as control and the system as
//! target. Each preparation selects a system state by measuring, which also
//! steers the environment: after the `Π₀` outcome the environment is `Π₀`,
//! after `Π₁` it is `Π₁`. A map reconstructed linearly from such data is
//! generally not completely positive, while the superchannel describing the
//! same experiment is.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{reconstruct_map, simulate_sequence, TomographyRecord};
use crate::channels::{gates, Dilation};
use crate::error::{Error, Result};
use crate::linalg::{c, herm_eig, partial_trace, tensor_product, ComplexMatrix, C64, ZERO};
use crate::maps::{check_cp, check_hp, check_tp, QuantumMap};
use crate::process_tensor::OperationSequence;
use crate::superchannel::{apply_superchannel, build_superchannel, ControlOperation};
use crate::tol;

/// How a preparation turns the system into the requested state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreparationProtocol {
    /// Measure and keep only the wanted outcome.
    Projection,
    /// Measure, then rotate the unwanted outcome onto the wanted state; no
    /// runs are discarded.
    ProjectRotate,
}

impl PreparationProtocol {
    pub fn as_str(self) -> &'static str {
        match self {
            PreparationProtocol::Projection => "projection",
            PreparationProtocol::ProjectRotate => "project_rotate",
        }
    }
}

impl fmt::Display for PreparationProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreparationProtocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" => Ok(PreparationProtocol::Projection),
            "project_rotate" | "project-rotate" => Ok(PreparationProtocol::ProjectRotate),
            _ => Err(Error::param(format!("unknown preparation protocol {s:?}"))),
        }
    }
}

/// The demonstration's inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcpScenario {
    pub mu: C64,
    pub nu: C64,
    pub protocol: PreparationProtocol,
    /// Which factor controls the CNOT.
    pub cnot_control: String,
    pub initial_se: ComplexMatrix,
}

/// What the linearly reconstructed map predicts for the held-out `Π₋`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearExtension {
    pub basis_labels: Vec<String>,
    pub predicted_minus: ComplexMatrix,
    pub predicted_minus_min_eigenvalue: f64,
    pub observed_minus: ComplexMatrix,
}

/// Environment states conditioned on the system being found in `Π₀` or `Π₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalEnvironment {
    pub given_0: ComplexMatrix,
    pub given_1: ComplexMatrix,
}

/// Superchannel description of the same experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcpSuperchannel {
    pub choi_min_eigenvalue: f64,
    /// Normalized output for the `Π₋` preparation.
    pub minus_output: ComplexMatrix,
    pub minus_residual: f64,
}

/// Verdicts on the reconstructed map and on the superchannel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcpVerdicts {
    /// Complete positivity of the reconstructed map.
    pub cp: bool,
    /// Minimum eigenvalue of the linear prediction for `Π₋`.
    pub min_eig: f64,
    /// Minimum Choi eigenvalue of the reconstructed map.
    pub choi_min_eig: f64,
    pub hp: bool,
    pub tp: bool,
    pub prediction_positive: bool,
    pub superchannel_cp: bool,
    pub superchannel_preserves_minus: bool,
    pub tolerance: f64,
}

/// Everything the demonstration computes. `reconstruction` is the linearly
/// reconstructed map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcpReport {
    pub scenario: NcpScenario,
    pub records: Vec<TomographyRecord>,
    pub reconstruction: QuantumMap,
    pub linear_extension: LinearExtension,
    pub conditional_environment: ConditionalEnvironment,
    pub superchannel: NcpSuperchannel,
    pub verdicts: NcpVerdicts,
}

struct Preparation {
    label: &'static str,
    state: ComplexMatrix,
    /// Projector onto the state orthogonal to `state`.
    complement: ComplexMatrix,
    /// Rotation taking `complement` to `state`.
    correction: ComplexMatrix,
}

fn preparations() -> Vec<Preparation> {
    let h = 0.5;
    let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
    let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
    let plus = ComplexMatrix::from_real_rows(&[&[h, h], &[h, h]]);
    let minus = ComplexMatrix::from_real_rows(&[&[h, -h], &[-h, h]]);
    let plus_i =
        ComplexMatrix::from_rows(&[vec![c(h, 0.0), c(0.0, -h)], vec![c(0.0, h), c(h, 0.0)]]);
    let minus_i = plus_i.conj();
    let prep = |label, state: &ComplexMatrix, complement: &ComplexMatrix, correction| Preparation {
        label,
        state: state.clone(),
        complement: complement.clone(),
        correction,
    };
    vec![
        prep("P0", &p0, &p1, gates::x()),
        prep("P1", &p1, &p0, gates::x()),
        prep("P+", &plus, &minus, gates::z()),
        prep("P-", &minus, &plus, gates::z()),
        prep("P+i", &plus_i, &minus_i, gates::z()),
    ]
}

impl Preparation {
    fn operation(&self, protocol: PreparationProtocol) -> Result<ControlOperation> {
        match protocol {
            PreparationProtocol::Projection => ControlOperation::projection(&self.state),
            PreparationProtocol::ProjectRotate => {
                let rotated = self.correction.matmul(&self.complement);
                ControlOperation::from_map(&QuantumMap::from_kraus(vec![
                    self.state.clone(),
                    rotated,
                ])?)
            }
        }
    }
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(&m.hermitian_part())?.min_eigenvalue())
}

fn conditional_environment(rho_se: &ComplexMatrix, p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let filter = tensor_product(p, &ComplexMatrix::identity(2));
    let env = partial_trace(&filter.matmul(rho_se).matmul(&filter), &[2, 2], &[0])?;
    let prob = env.trace().re;
    if prob <= tol::SUPPORT {
        return Ok(ComplexMatrix::zeros(2, 2));
    }
    Ok(env.scale_real(1.0 / prob))
}

/// Runs the demonstration; `|μ|² + |ν|²` must equal 2.
pub fn ncp_demo(mu: C64, nu: C64, protocol: PreparationProtocol) -> Result<NcpReport> {
    let norm = mu.norm_sqr() + nu.norm_sqr();
    if (norm - 2.0).abs() > tol::VERDICT {
        return Err(Error::param(format!(
            "|mu|^2 + |nu|^2 must equal 2, got {norm}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = ComplexMatrix::column(vec![mu * s, ZERO, ZERO, nu * s]);
    let rho_se = ComplexMatrix::projector(&psi);
    let dilation = Dilation::new(2, 2, rho_se.clone(), vec![gates::cnot_reversed()])?;

    let preps = preparations();
    let mut records = Vec::with_capacity(preps.len());
    for prep in &preps {
        let seq = OperationSequence::product(vec![prep.operation(protocol)?])?;
        let rec = simulate_sequence(&dilation, &seq)?;
        records.push(TomographyRecord {
            prepared: prep.label.to_string(),
            ..rec
        });
    }

    // Π₋ = Π₀ + Π₁ − Π₊ lies in the span of the other four and is held out.
    let fit: Vec<usize> = vec![0, 1, 2, 4];
    let basis: Vec<ComplexMatrix> = fit.iter().map(|&i| preps[i].state.clone()).collect();
    let fit_records: Vec<TomographyRecord> = fit.iter().map(|&i| records[i].clone()).collect();
    let map = reconstruct_map(&fit_records, &basis)?;
    let cp = check_cp(&map);
    let minus = &preps[3].state;
    let predicted_minus = map.apply(minus)?;
    let predicted_minus_min_eigenvalue = min_eigenvalue(&predicted_minus)?;
    let observed_minus = records[3].normalized_output()?;

    let sc = build_superchannel(&dilation)?;
    let sc_min = sc.min_eigenvalue();
    let raw = apply_superchannel(&sc, &preps[3].operation(protocol)?)?;
    let prob = raw.trace().re;
    let minus_output = if prob > tol::SUPPORT {
        raw.scale_real(1.0 / prob)
    } else {
        raw
    };
    let minus_residual = minus_output.distance(minus);

    let tp = check_tp(&map);
    let hp = check_hp(&map);
    let linear_extension = LinearExtension {
        basis_labels: fit.iter().map(|&i| preps[i].label.to_string()).collect(),
        predicted_minus,
        predicted_minus_min_eigenvalue,
        observed_minus,
    };
    let verdicts = NcpVerdicts {
        cp: cp.holds,
        min_eig: predicted_minus_min_eigenvalue,
        choi_min_eig: cp.min_eigenvalue,
        hp: hp.holds,
        tp: tp.holds,
        prediction_positive: predicted_minus_min_eigenvalue >= -tol::VERDICT,
        superchannel_cp: sc_min >= -tol::VERDICT,
        superchannel_preserves_minus: minus_residual <= tol::VERDICT,
        tolerance: tol::VERDICT,
    };
    Ok(NcpReport {
        scenario: NcpScenario {
            mu,
            nu,
            protocol,
            cnot_control: "environment".to_string(),
            initial_se: rho_se.clone(),
        },
        records,
        reconstruction: map,
        linear_extension,
        conditional_environment: ConditionalEnvironment {
            given_0: conditional_environment(&rho_se, &preps[0].state)?,
            given_1: conditional_environment(&rho_se, &preps[1].state)?,
        },
        superchannel: NcpSuperchannel {
            choi_min_eigenvalue: sc_min,
            minus_output,
            minus_residual,
        },
        verdicts,
    })
}
