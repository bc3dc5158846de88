//! JSON exchange format for quasitoric pairs.
//!
//! Integers within `±2^53` are written as JSON numbers and larger ones as
//! decimal strings, so that readers using doubles lose nothing.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::polytope::validate_polytope;
use crate::qtoric::QuasitoricPair;

const SAFE: i64 = 1 << 53;

/// An `i64` with the number-or-string JSON encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonInt(pub i64);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.abs() <= SAFE {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
                i64::try_from(v).map(JsonInt).map_err(|_| E::custom(format!("{v} does not fit in i64")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
                v.trim().parse().map(JsonInt).map_err(|_| E::custom(format!("{v:?} is not an integer")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasitoricDocument {
    pub dim: usize,
    pub facets: usize,
    pub vertices: Vec<Vec<usize>>,
    pub lambda: Vec<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl QuasitoricDocument {
    pub fn from_pair(q: &QuasitoricPair) -> Self {
        QuasitoricDocument {
            dim: q.dim(),
            facets: q.facet_count(),
            vertices: q.polytope().vertices().to_vec(),
            lambda: q.lambda().to_rows().into_iter().map(|r| r.into_iter().map(JsonInt).collect()).collect(),
            labels: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_pair(&self) -> Result<QuasitoricPair> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.facets {
                return Err(Error::Document(format!("{} labels for {} facets", labels.len(), self.facets)));
            }
        }
        if self.lambda.len() != self.dim || self.lambda.iter().any(|r| r.len() != self.facets) {
            return Err(Error::DimensionMismatch(format!(
                "lambda must be {} rows of {} entries",
                self.dim, self.facets
            )));
        }
        let p = validate_polytope(&self.vertices, self.dim, self.facets)?;
        let rows: Vec<Vec<i64>> = self.lambda.iter().map(|r| r.iter().map(|x| x.0).collect()).collect();
        let lambda = if self.dim == 0 { IntMatrix::zeros(0, self.facets) } else { IntMatrix::from_rows(&rows)? };
        QuasitoricPair::new(p, lambda)
    }
}
