//! Operation pool construction and hard limits on layouts.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::simulator::GateKind;

/// Two-qubit connectivity used to generate CNOT entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant", content = "edges")]
pub enum Topology {
    Line,
    Ring,
    AllToAll,
    /// Ordered `(control, target)` pairs, used as given.
    Custom(Vec<(usize, usize)>),
}

impl Topology {
    /// Undirected adjacencies for the built-in variants.
    pub fn adjacencies(&self, num_qubits: usize) -> Vec<(usize, usize)> {
        let n = num_qubits;
        match self {
            Topology::Line => (1..n).map(|q| (q - 1, q)).collect(),
            Topology::Ring => {
                let mut v: Vec<_> = (1..n).map(|q| (q - 1, q)).collect();
                if n > 2 {
                    v.push((0, n - 1));
                }
                v
            }
            Topology::AllToAll => {
                let mut v = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        v.push((a, b));
                    }
                }
                v
            }
            Topology::Custom(edges) => edges.clone(),
        }
    }

    /// Directed `(control, target)` pairs sorted by control then target.
    pub fn directed_edges(&self, num_qubits: usize) -> Result<Vec<(usize, usize)>> {
        let mut set = BTreeSet::new();
        match self {
            Topology::Custom(edges) => {
                for &(c, t) in edges {
                    if c == t || c >= num_qubits || t >= num_qubits {
                        return Err(Error::Configuration(format!(
                            "invalid custom edge ({c}, {t}) on {num_qubits} qubit(s)"
                        )));
                    }
                    set.insert((c, t));
                }
            }
            _ => {
                for (a, b) in self.adjacencies(num_qubits) {
                    set.insert((a, b));
                    set.insert((b, a));
                }
            }
        }
        Ok(set.into_iter().collect())
    }
}

/// A gate prototype: kind and wires, angles unbound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub kind: GateKind,
    pub wires: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperationPool {
    num_qubits: usize,
    entries: Vec<PoolEntry>,
    max_params: usize,
    placeholder_index: Option<usize>,
}

impl OperationPool {
    /// Builds a pool from explicit entries. At most one placeholder is allowed.
    pub fn from_entries(num_qubits: usize, entries: Vec<PoolEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Configuration("operation pool is empty".into()));
        }
        let mut placeholder_index = None;
        for (i, e) in entries.iter().enumerate() {
            if e.wires.len() != e.kind.num_wires() {
                return Err(Error::Configuration(format!(
                    "pool entry {i}: {} needs {} wire(s)",
                    e.kind,
                    e.kind.num_wires()
                )));
            }
            if e.wires.iter().any(|&w| w >= num_qubits) {
                return Err(Error::Configuration(format!("pool entry {i}: wire out of range")));
            }
            if e.kind == GateKind::Placeholder {
                if placeholder_index.is_some() {
                    return Err(Error::Configuration("more than one placeholder".into()));
                }
                placeholder_index = Some(i);
            }
        }
        let max_params = entries.iter().map(|e| e.kind.num_params()).max().unwrap_or(0);
        Ok(Self { num_qubits, entries, max_params, placeholder_index })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// `c = |C|`
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// `l`, the largest angle count of any entry.
    pub fn max_params(&self) -> usize {
        self.max_params
    }

    pub fn placeholder_index(&self) -> Option<usize> {
        self.placeholder_index
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn entry(&self, k: usize) -> Result<&PoolEntry> {
        self.entries
            .get(k)
            .ok_or_else(|| Error::Bounds(format!("pool index {k} >= pool size {}", self.entries.len())))
    }

    pub fn is_parametric(&self) -> bool {
        self.max_params > 0
    }

    /// Index of the entry with this kind and wires, if any.
    pub fn find(&self, kind: GateKind, wires: &[usize]) -> Option<usize> {
        self.entries.iter().position(|e| e.kind == kind && e.wires == wires)
    }

    pub fn validate_layout(&self, layout: &CircuitLayout) -> Result<()> {
        for &k in layout.iter() {
            self.entry(k)?;
        }
        Ok(())
    }

    pub fn count_kind(&self, layout: &CircuitLayout, kind: GateKind) -> usize {
        layout.iter().filter(|&&k| self.entries.get(k).is_some_and(|e| e.kind == kind)).count()
    }
}

/// `build_pool`: one entry per (single-qubit kind, qubit), one CNOT per
/// directed topology edge, then the optional placeholder.
pub fn build_pool(
    num_qubits: usize,
    single_qubit_kinds: &[GateKind],
    topology: &Topology,
    include_placeholder: bool,
) -> Result<OperationPool> {
    if num_qubits == 0 {
        return Err(Error::Configuration("pool needs at least one qubit".into()));
    }
    let kinds: BTreeSet<GateKind> = single_qubit_kinds.iter().copied().collect();
    if let Some(bad) = kinds.iter().find(|k| k.num_wires() != 1) {
        return Err(Error::Configuration(format!("{bad} is not a single-qubit kind")));
    }
    let mut entries = Vec::new();
    for &kind in &kinds {
        for q in 0..num_qubits {
            entries.push(PoolEntry { kind, wires: vec![q] });
        }
    }
    for (c, t) in topology.directed_edges(num_qubits)? {
        entries.push(PoolEntry { kind: GateKind::Cnot, wires: vec![c, t] });
    }
    if entries.is_empty() {
        return Err(Error::Configuration("empty gate set".into()));
    }
    if include_placeholder {
        entries.push(PoolEntry { kind: GateKind::Placeholder, wires: vec![] });
    }
    OperationPool::from_entries(num_qubits, entries)
}

/// Per-kind caps on layouts plus the layout length `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardLimits {
    pub max_count_per_kind: BTreeMap<GateKind, usize>,
    pub max_layers: usize,
}

impl HardLimits {
    pub fn new(max_layers: usize) -> Result<Self> {
        if max_layers == 0 {
            return Err(Error::Configuration("max_layers must be >= 1".into()));
        }
        Ok(Self { max_count_per_kind: BTreeMap::new(), max_layers })
    }

    pub fn with_cap(mut self, kind: GateKind, cap: usize) -> Self {
        self.max_count_per_kind.insert(kind, cap);
        self
    }

    /// True when every kind count in `layout` is within its cap.
    pub fn admits(&self, pool: &OperationPool, layout: &CircuitLayout) -> bool {
        layout.len() <= self.max_layers
            && self
                .max_count_per_kind
                .iter()
                .all(|(&kind, &cap)| kind == GateKind::Placeholder || pool.count_kind(layout, kind) <= cap)
    }
}

/// Pool indices that may extend `prefix` without breaking a cap.
///
/// The placeholder, when present, is always permitted.
pub fn allowed_actions(
    prefix: &CircuitLayout,
    pool: &OperationPool,
    limits: &HardLimits,
) -> Result<Vec<usize>> {
    if prefix.len() >= limits.max_layers {
        return Err(Error::State(format!(
            "prefix already has {} of {} layers",
            prefix.len(),
            limits.max_layers
        )));
    }
    pool.validate_layout(prefix)?;
    let mut counts: BTreeMap<GateKind, usize> = BTreeMap::new();
    for &k in prefix.iter() {
        *counts.entry(pool.entries[k].kind).or_default() += 1;
    }
    Ok(pool
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            e.kind == GateKind::Placeholder
                || limits
                    .max_count_per_kind
                    .get(&e.kind)
                    .is_none_or(|&cap| counts.get(&e.kind).copied().unwrap_or(0) < cap)
        })
        .map(|(i, _)| i)
        .collect())
}
