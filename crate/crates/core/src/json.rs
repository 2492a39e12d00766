//! JSON forms of graphs, matrices, verdicts and certificates. Integers inside
//! matrices are always decimal strings.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::congruence::{CongruenceVerdict, SeparatingInvariant};
use crate::duality::DualCertificate;
use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::matrix::IntMatrix;
use crate::planarity::KuratowskiEvidence;

/// Serde adapter: one integer as a decimal string.
pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}

/// Serde adapter: a list of integers as decimal strings.
pub mod bigint_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<String>>,
}

impl From<&IntMatrix> for MatrixJson {
    fn from(m: &IntMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for IntMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<IntMatrix> {
        if j.data.len() != j.rows || j.data.iter().any(|r| r.len() != j.cols) {
            return Err(Error::Parse(format!("matrix data does not match {}x{}", j.rows, j.cols)));
        }
        let mut flat = Vec::with_capacity(j.rows * j.cols);
        for s in j.data.iter().flatten() {
            flat.push(s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?);
        }
        IntMatrix::from_vec(j.rows, j.cols, flat)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        IntMatrix::try_from(MatrixJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default)]
    pub name: String,
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&MultiGraph> for GraphJson {
    fn from(g: &MultiGraph) -> Self {
        GraphJson { name: g.name().to_string(), num_vertices: g.num_vertices(), edges: g.edges().to_vec() }
    }
}

impl TryFrom<GraphJson> for MultiGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<MultiGraph> {
        Ok(MultiGraph::new(j.num_vertices, j.edges)?.with_name(j.name))
    }
}

impl Serialize for MultiGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MultiGraph::try_from(GraphJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn graph_to_value(g: &MultiGraph) -> Value {
    serde_json::to_value(g).expect("graph serializes")
}

pub fn matrix_to_value(m: &IntMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

pub fn verdict_to_value(v: &CongruenceVerdict) -> Value {
    json!({
        "status": v.status,
        "witness": v.witness.as_ref().map(|w| matrix_to_value(w.matrix())),
        "separating_invariant": v.separating_invariant.as_ref().map(separating_to_value),
    })
}

fn separating_to_value(s: &SeparatingInvariant) -> Value {
    serde_json::to_value(s).expect("invariant serializes")
}

pub fn certificate_to_value(c: &DualCertificate) -> Value {
    json!({
        "dual_graph": graph_to_value(&c.dual_graph),
        "dual_orientation": c.dual_orientation.reversed_bits(),
        "witness_z": matrix_to_value(c.witness_z.matrix()),
        "flow_basis": matrix_to_value(&c.flow_basis),
        "forest": c.forest.forest_edges(),
        "beta": c.edge_bijection,
        "trace": c.trace.to_string(),
        "reduced_dual_laplacian": matrix_to_value(&c.dual_laplacian.reduced),
    })
}

pub fn evidence_to_value(e: &KuratowskiEvidence) -> Value {
    serde_json::to_value(e).expect("evidence serializes")
}
