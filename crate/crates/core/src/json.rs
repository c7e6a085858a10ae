//! Manifold-spec files and JSON helpers.
//!
//! A manifold spec is a JSON object
//!
//! ```json
//! {"name": "CP2", "gram": [[1]], "euler": 3, "w2": [1],
//!  "fiber": null, "complex_c1": [3]}
//! ```
//!
//! `fiber` and `complex_c1` are optional. A `sigma` field is accepted and
//! ignored: the signature is always recomputed from `gram`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CohClass, IntersectionLattice};
use crate::manifold::{FourManifoldModel, MAX_RANK};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
    pub euler: i64,
    pub w2: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_c1: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
}

impl ManifoldSpec {
    pub fn from_model(m: &FourManifoldModel) -> Self {
        ManifoldSpec {
            name: m.name.clone(),
            gram: m.lattice.gram().to_vec(),
            euler: m.euler,
            w2: m.w2.coords().to_vec(),
            fiber: m.fiber.as_ref().map(|f| f.coords().to_vec()),
            complex_c1: m.complex_c1.as_ref().map(|c| c.coords().to_vec()),
            sigma: Some(m.sigma),
        }
    }

    /// Structural checks only; invariants are left to `validate`.
    pub fn into_model(self) -> Result<FourManifoldModel> {
        let rank = self.gram.len();
        if rank > MAX_RANK {
            return Err(Error::Spec(format!(
                "rank {rank} exceeds the maximum {MAX_RANK}"
            )));
        }
        let lattice =
            IntersectionLattice::new(self.gram).map_err(|e| Error::Spec(e.to_string()))?;
        let class = |field: &str, v: Vec<i64>| -> Result<CohClass> {
            if v.len() != rank {
                return Err(Error::Spec(format!(
                    "`{field}` has length {}, lattice rank is {rank}",
                    v.len()
                )));
            }
            Ok(CohClass::new(v))
        };
        let w2 = class("w2", self.w2)?;
        let fiber = self.fiber.map(|f| class("fiber", f)).transpose()?;
        let complex_c1 = self
            .complex_c1
            .map(|c| class("complex_c1", c))
            .transpose()?;
        let sigma = lattice.signature().map(|s| s.sigma()).unwrap_or(0);
        Ok(FourManifoldModel {
            name: self.name,
            lattice,
            euler: self.euler,
            sigma,
            w2,
            fiber,
            complex_c1,
            simply_connected: false,
        })
    }
}

/// Parses a manifold-spec document. The result is not validated.
pub fn parse_manifold_spec(text: &str) -> Result<FourManifoldModel> {
    let spec: ManifoldSpec = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    spec.into_model()
}

pub fn manifold_spec_json(m: &FourManifoldModel) -> String {
    serde_json::to_string_pretty(&ManifoldSpec::from_model(m)).expect("spec serializes")
}

/// Serde adapter writing a [`num_bigint::BigInt`] as a JSON integer.
///
/// Values must fit in `i128`, far beyond anything the computations produce
/// for lattices of rank at most [`MAX_RANK`].
pub mod bigint {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{de, ser, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => match v.to_i128() {
                Some(x) => s.serialize_i128(x),
                None => Err(ser::Error::custom(format!(
                    "integer {v} exceeds the JSON range"
                ))),
            },
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = i128::deserialize(d)
            .map_err(|e| de::Error::custom(format!("expected integer: {e}")))?;
        Ok(BigInt::from(v))
    }
}
