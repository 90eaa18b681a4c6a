use std::fmt;
use std::str::FromStr;

use super::ProcessTensor;
use crate::error::{Error, Result};
use crate::linalg::{relative_entropy, trace_distance};

/// Distance used to compare a process with its Markov product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    Trace,
    RelativeEntropy,
}

impl Distance {
    pub fn as_str(self) -> &'static str {
        match self {
            Distance::Trace => "trace",
            Distance::RelativeEntropy => "relative_entropy",
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Distance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(Distance::Trace),
            "relative_entropy" | "relative-entropy" => Ok(Distance::RelativeEntropy),
            _ => Err(Error::param(format!("unknown distance {s:?}"))),
        }
    }
}

/// `𝒩 = 𝒟(Υ, Υ_Mkv)` between the unit-trace normalized Choi states of the
/// process and of its Markov product. The relative entropy is taken as
/// `S(Υ ‖ Υ_Mkv)` and is `+∞` when the support condition fails.
pub fn non_markovianity(pt: &ProcessTensor, distance: Distance) -> Result<f64> {
    let actual = pt.normalized_choi();
    let markov = pt.markov_product().normalized_choi();
    match distance {
        Distance::Trace => trace_distance(&actual, &markov),
        Distance::RelativeEntropy => {
            let s = relative_entropy(&actual, &markov)?;
            if s.is_infinite() {
                log::warn!("process Choi state is not supported on its Markov product; relative entropy is infinite");
            }
            Ok(s.max(0.0))
        }
    }
}

/// Whether the trace distance between the normalized Choi state and its
/// Markov product is at most `tol`.
pub fn is_markov(pt: &ProcessTensor, tol: f64) -> Result<bool> {
    Ok(non_markovianity(pt, Distance::Trace)? <= tol)
}

/// Probability `e^{-n𝒩}` of mistaking the process for a Markovian one after
/// `n` runs.
pub fn surprise(n: u32, non_markovianity: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("surprise needs n >= 1"));
    }
    if non_markovianity.is_nan() || non_markovianity < 0.0 {
        return Err(Error::param(format!(
            "non-Markovianity must be non-negative, got {non_markovianity}"
        )));
    }
    Ok((-(n as f64) * non_markovianity).exp())
}
