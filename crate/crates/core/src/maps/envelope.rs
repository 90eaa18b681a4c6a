//! JSON envelope for [`QuantumMap`].
//!
//! ```json
//! {"d_in": 2, "d_out": 2, "repr": "kraus",
//!  "payload": {"left": [<matrix>...], "right": [<matrix>...]}}
//! ```
//!
//! `aform` and `bform` payloads are a single matrix; `tomographic` payloads are
//! `{"inputs": [...], "duals": [...], "outputs": [...]}`. An optional `meta`
//! object is carried through untouched.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    AForm, BForm, OperatorSumRep, QuantumMap, Representation, RepresentationKind, TomographicRep,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapEnvelope {
    pub d_in: usize,
    pub d_out: usize,
    pub repr: String,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

#[derive(Serialize, Deserialize)]
struct PairsPayload {
    left: Vec<ComplexMatrix>,
    right: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct TomographicPayload {
    inputs: Vec<ComplexMatrix>,
    duals: Vec<ComplexMatrix>,
    outputs: Vec<ComplexMatrix>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("matrices serialize infallibly")
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))
}

impl From<&QuantumMap> for MapEnvelope {
    fn from(map: &QuantumMap) -> Self {
        let payload = match map.representation() {
            Representation::Tomographic(t) => to_value(&TomographicPayload {
                inputs: t.inputs.clone(),
                duals: t.duals.clone(),
                outputs: t.outputs.clone(),
            }),
            Representation::OperatorSum(o) => to_value(&PairsPayload {
                left: o.left.clone(),
                right: o.right.clone(),
            }),
            Representation::AForm(a) => to_value(a.matrix()),
            Representation::BForm(b) => to_value(b.matrix()),
        };
        MapEnvelope {
            d_in: map.d_in(),
            d_out: map.d_out(),
            repr: map.kind().as_str().to_owned(),
            payload,
            meta: None,
        }
    }
}

impl TryFrom<MapEnvelope> for QuantumMap {
    type Error = Error;

    fn try_from(env: MapEnvelope) -> Result<Self> {
        let kind: RepresentationKind = env
            .repr
            .parse()
            .map_err(|_| Error::Format(format!("unknown repr {:?}", env.repr)))?;
        let map: QuantumMap = match kind {
            RepresentationKind::Tomographic => {
                let p: TomographicPayload = from_value(env.payload)?;
                TomographicRep::with_duals(p.inputs, p.duals, p.outputs)?.into()
            }
            RepresentationKind::Kraus => {
                let p: PairsPayload = from_value(env.payload)?;
                OperatorSumRep::new(p.left, p.right)?.into()
            }
            RepresentationKind::AForm => {
                AForm::new(from_value(env.payload)?, env.d_out, env.d_in)?.into()
            }
            RepresentationKind::BForm => {
                BForm::new(from_value(env.payload)?, env.d_out, env.d_in)?.into()
            }
        };
        if (map.d_in(), map.d_out()) != (env.d_in, env.d_out) {
            return Err(Error::dims(format!(
                "envelope declares {} -> {}, payload describes {} -> {}",
                env.d_in,
                env.d_out,
                map.d_in(),
                map.d_out()
            )));
        }
        Ok(map)
    }
}

impl Serialize for QuantumMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapEnvelope::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuantumMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let env = MapEnvelope::deserialize(d)?;
        QuantumMap::try_from(env).map_err(serde::de::Error::custom)
    }
}
