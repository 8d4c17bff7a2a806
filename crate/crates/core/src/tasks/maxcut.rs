//! Weighted graphs and the MaxCut cost Hamiltonian.
//!
//! Graph files look like `{"vertices": 5, "edges": [[0, 2, 2.0], [0, 4]]}`;
//! a missing weight means 1.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{PauliString, PauliSumObservable, PauliTerm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawEdge", into = "(usize, usize, f64)")]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEdge {
    Weighted(usize, usize, f64),
    Unweighted(usize, usize),
}

impl From<RawEdge> for Edge {
    fn from(raw: RawEdge) -> Self {
        match raw {
            RawEdge::Weighted(u, v, weight) => Edge { u, v, weight },
            RawEdge::Unweighted(u, v) => Edge { u, v, weight: 1.0 },
        }
    }
}

impl From<Edge> for (usize, usize, f64) {
    fn from(e: Edge) -> Self {
        (e.u, e.v, e.weight)
    }
}

/// Undirected simple graph with real edge weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<Edge>,
}

#[derive(Deserialize)]
struct RawGraph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        Graph::new(raw.vertices, raw.edges)
    }
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Graph("graph needs at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::Graph(format!("edge ({}, {}) outside {vertices} vertices", e.u, e.v)));
            }
            if e.u == e.v {
                return Err(Error::Graph(format!("self-loop on vertex {}", e.u)));
            }
            if !e.weight.is_finite() {
                return Err(Error::Graph(format!("edge ({}, {}) has non-finite weight", e.u, e.v)));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::Graph(format!("duplicate edge ({}, {})", e.u, e.v)));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn unweighted(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(vertices, edges.iter().map(|&(u, v)| Edge { u, v, weight: 1.0 }).collect())
    }

    pub fn weighted(vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(vertices, edges.iter().map(|&(u, v, weight)| Edge { u, v, weight }).collect())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Weight of edges whose endpoints differ in `bits` (vertex 0 first).
    pub fn cut_value(&self, bits: &str) -> Result<f64> {
        let b = bits.as_bytes();
        if b.len() != self.vertices || !b.iter().all(|c| *c == b'0' || *c == b'1') {
            return Err(Error::Parse(format!("'{bits}' is not a {}-bit string", self.vertices)));
        }
        Ok(self.edges.iter().filter(|e| b[e.u] != b[e.v]).map(|e| e.weight).sum())
    }
}

/// `H_C = sum_(u,v) w_uv (Z_u Z_v - I) / 2`, so `<H_C>` is minus the expected cut.
pub fn maxcut_hamiltonian(graph: &Graph) -> Result<PauliSumObservable> {
    let n = graph.vertices;
    let mut terms = Vec::with_capacity(graph.edges.len() + 1);
    if !graph.edges.is_empty() {
        terms.push(PauliTerm { coeff: -graph.total_weight() / 2.0, pauli: PauliString::identity(n) });
    }
    for e in &graph.edges {
        terms.push(PauliTerm { coeff: e.weight / 2.0, pauli: PauliString::from_sparse(n, &[(e.u, 'Z'), (e.v, 'Z')])? });
    }
    PauliSumObservable::new(n, terms)
}
