//! Run configuration files (TOML).
//!
//! ```toml
//! seed = 0
//! output_dir = "out/maxcut"
//!
//! [task]
//! variant = "max_cut"           # qec_encoding422 | vqls | vqe_chemistry | max_cut
//! graph = "graphs/w5.json"      # max_cut; vqe_chemistry takes `hamiltonian`
//! early_stop_reward = 17.5      # optional overrides: penalty_beta, reward_scaling, initial_state
//!
//! [pool]
//! gates = ["rot"]
//! topology = "line"             # line | ring | all_to_all | custom (+ edges = [[0, 1], ...])
//! placeholder = true
//! layers = 10
//! caps = { cnot = 5 }
//!
//! [search]                      # SearchConfig fields
//! [optimizer]                   # OptimizerConfig fields, used while searching
//! [finetune]                    # OptimizerConfig fields, stored with the circuit
//! ```
//!
//! Relative paths are resolved against the directory of the config file.
//! Every check runs before any simulation, and every error names a line.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use qas_core::simulator::MAX_QUBITS;
use qas_core::{
    build_pool, GateKind, Graph, HardLimits, InitKind, OperationPool, OptimizerConfig, PauliSumObservable,
    RewardScaling, SearchConfig, SharedParameters, Task, Topology, VqlsPayload,
};

use crate::circuit::{Problem, TaskSpec};
use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    /// Starting tensor for the search, shape `(layers, pool size, max params)`.
    initial_parameters: Option<Spanned<PathBuf>>,
    task: Spanned<RawTask>,
    pool: Spanned<RawPool>,
    search: Option<Spanned<SearchConfig>>,
    optimizer: Option<Spanned<OptimizerConfig>>,
    finetune: Option<Spanned<OptimizerConfig>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Variant {
    QecEncoding422,
    Vqls,
    VqeChemistry,
    MaxCut,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    variant: Spanned<Variant>,
    hamiltonian: Option<Spanned<PathBuf>>,
    graph: Option<Spanned<PathBuf>>,
    vqls: Option<Spanned<RawVqls>>,
    penalty_beta: Option<Spanned<f64>>,
    reward_scaling: Option<RewardScaling>,
    early_stop_reward: Option<Spanned<f64>>,
    initial_state: Option<InitKind>,
}

/// Either a Pauli-sum file for `A` or the coefficients of the 4-qubit
/// benchmark system `zeta I + J X_0 + J X_1 + eta Z_2 Z_3`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVqls {
    matrix: Option<PathBuf>,
    zeta: Option<f64>,
    j: Option<f64>,
    eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TopologyName {
    Line,
    Ring,
    AllToAll,
    Custom,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPool {
    gates: Spanned<Vec<GateKind>>,
    topology: Spanned<TopologyName>,
    edges: Option<Spanned<Vec<(usize, usize)>>>,
    #[serde(default = "yes")]
    placeholder: bool,
    layers: Spanned<usize>,
    #[serde(default)]
    caps: BTreeMap<GateKind, usize>,
}

fn yes() -> bool {
    true
}

/// A validated run configuration with every input file loaded.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub path: PathBuf,
    pub task_spec: TaskSpec,
    pub task: Task,
    pub pool: OperationPool,
    pub limits: HardLimits,
    pub search: SearchConfig,
    pub optimizer: OptimizerConfig,
    pub finetune: OptimizerConfig,
    pub initial_parameters: Option<SharedParameters>,
    pub output_dir: PathBuf,
}

/// Positions errors within one config file.
struct Locator<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Locator<'_> {
    fn line_of(&self, offset: usize) -> usize {
        let end = offset.min(self.text.len());
        self.text[..end].matches('\n').count() + 1
    }

    fn at(&self, span: Range<usize>, message: impl ToString) -> CliError {
        CliError::Config { path: self.path.to_path_buf(), line: self.line_of(span.start), message: message.to_string() }
    }

    fn resolve(&self, rel: &Path) -> PathBuf {
        match self.path.parent() {
            Some(dir) if rel.is_relative() => dir.join(rel),
            _ => rel.to_path_buf(),
        }
    }

    fn read(&self, rel: &Path, span: Range<usize>) -> CliResult<(PathBuf, String)> {
        let full = self.resolve(rel);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| self.at(span, format!("cannot read {}: {e}", full.display())))?;
        Ok((full, text))
    }
}

impl RunConfig {
    /// Reads and validates `path`. `seed`, when given, overrides both the
    /// top-level seed and the per-section seeds.
    pub fn load(path: &Path, seed: Option<u64>) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, &text, seed)
    }

    pub fn parse(path: &Path, text: &str, seed: Option<u64>) -> CliResult<Self> {
        let loc = Locator { path, text };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(1, |s| loc.line_of(s.start));
            CliError::Config { path: path.to_path_buf(), line, message: e.message().to_string() }
        })?;

        let (problem, task) = build_task(&loc, &raw.task)?;
        let (pool, limits) = build_pool_and_limits(&loc, &raw.pool, task.num_qubits)?;
        task.validate_pool(&pool).map_err(|e| loc.at(raw.pool.span(), e))?;
        let task_spec = TaskSpec::from_task(problem, &task);

        let (mut search, search_span) = raw.search.map_or((SearchConfig::default(), 0..0), split);
        let (mut optimizer, optimizer_span) = raw.optimizer.map_or((OptimizerConfig::default(), 0..0), split);
        let (finetune, finetune_span) = raw.finetune.map_or((OptimizerConfig::default(), 0..0), split);
        if let Some(s) = seed.or(raw.seed) {
            search.seed = s;
            optimizer.seed = s;
        }
        search.validate().map_err(|e| loc.at(search_span, e))?;
        optimizer.validate().map_err(|e| loc.at(optimizer_span, e))?;
        finetune.validate().map_err(|e| loc.at(finetune_span, e))?;

        let initial_parameters = match &raw.initial_parameters {
            Some(file) => {
                let (full, text) = loc.read(file.get_ref(), file.span())?;
                let params: SharedParameters = serde_json::from_str(&text)
                    .map_err(|e| loc.at(file.span(), format!("{}: {e}", full.display())))?;
                let expected = (limits.max_layers, pool.size(), pool.max_params());
                if params.shape() != expected {
                    return Err(loc.at(
                        file.span(),
                        format!("parameter shape {:?} does not match (p, c, l) = {expected:?}", params.shape()),
                    ));
                }
                Some(params)
            }
            None => None,
        };

        let output_dir = loc.resolve(&raw.output_dir.unwrap_or_else(|| PathBuf::from("out")));
        Ok(Self {
            path: path.to_path_buf(),
            task_spec,
            task,
            pool,
            limits,
            search,
            optimizer,
            finetune,
            initial_parameters,
            output_dir,
        })
    }
}

fn split<T>(s: Spanned<T>) -> (T, Range<usize>) {
    let span = s.span();
    (s.into_inner(), span)
}

fn load_observable(loc: &Locator, rel: &Path, span: Range<usize>) -> CliResult<PauliSumObservable> {
    let (full, text) = loc.read(rel, span.clone())?;
    PauliSumObservable::from_json_str(&text).map_err(|e| loc.at(span, format!("{}: {e}", full.display())))
}

fn build_task(loc: &Locator, raw: &Spanned<RawTask>) -> CliResult<(Problem, Task)> {
    let t = raw.get_ref();
    let variant_span = t.variant.span();
    let require = |field: &Option<Spanned<PathBuf>>, name: &str| {
        field.clone().ok_or_else(|| loc.at(variant_span.clone(), format!("this task variant needs `{name}`")))
    };
    let reject = |field: bool, name: &str| {
        if field {
            Err(loc.at(variant_span.clone(), format!("`{name}` does not apply to this task variant")))
        } else {
            Ok(())
        }
    };
    let problem = match *t.variant.get_ref() {
        Variant::QecEncoding422 => {
            reject(t.hamiltonian.is_some(), "hamiltonian")?;
            reject(t.graph.is_some(), "graph")?;
            reject(t.vqls.is_some(), "vqls")?;
            Problem::QecEncoding422
        }
        Variant::VqeChemistry => {
            reject(t.graph.is_some(), "graph")?;
            reject(t.vqls.is_some(), "vqls")?;
            let file = require(&t.hamiltonian, "hamiltonian")?;
            Problem::VqeChemistry { hamiltonian: load_observable(loc, file.get_ref(), file.span())? }
        }
        Variant::MaxCut => {
            reject(t.hamiltonian.is_some(), "hamiltonian")?;
            reject(t.vqls.is_some(), "vqls")?;
            let file = require(&t.graph, "graph")?;
            let (full, text) = loc.read(file.get_ref(), file.span())?;
            let graph = Graph::from_json_str(&text)
                .map_err(|e| loc.at(file.span(), format!("{}: {e}", full.display())))?;
            Problem::MaxCut { graph }
        }
        Variant::Vqls => {
            reject(t.hamiltonian.is_some(), "hamiltonian")?;
            reject(t.graph.is_some(), "graph")?;
            let (payload, span) = match &t.vqls {
                None => (VqlsPayload::benchmark(1.0, 0.1, 0.2), raw.span()),
                Some(v) => {
                    let span = v.span();
                    let v = v.get_ref();
                    let coeffs = v.zeta.is_some() || v.j.is_some() || v.eta.is_some();
                    let payload = match &v.matrix {
                        Some(_) if coeffs => {
                            return Err(loc.at(span, "give either `matrix` or zeta/j/eta, not both"));
                        }
                        Some(m) => VqlsPayload::from_observable(load_observable(loc, m, span.clone())?),
                        None => VqlsPayload::benchmark(v.zeta.unwrap_or(1.0), v.j.unwrap_or(0.1), v.eta.unwrap_or(0.2)),
                    };
                    (payload, span)
                }
            };
            let payload = payload.map_err(|e| loc.at(span, e))?;
            Problem::Vqls { a: payload.matrix().clone() }
        }
    };

    let mut task = problem.default_task().map_err(|e| loc.at(raw.span(), e))?;
    if task.num_qubits > MAX_QUBITS {
        return Err(loc.at(raw.span(), format!("{} qubits exceed the simulator limit of {MAX_QUBITS}", task.num_qubits)));
    }
    if let Some(beta) = &t.penalty_beta {
        if !(*beta.get_ref() >= 0.0 && beta.get_ref().is_finite()) {
            return Err(loc.at(beta.span(), "penalty_beta must be a finite number >= 0"));
        }
        task = task.with_penalty(*beta.get_ref());
    }
    if let Some(r) = &t.early_stop_reward {
        if !r.get_ref().is_finite() {
            return Err(loc.at(r.span(), "early_stop_reward must be finite"));
        }
        task = task.with_early_stop(Some(*r.get_ref()));
    }
    if let Some(s) = t.reward_scaling {
        task = task.with_reward_scaling(s);
    }
    if let Some(k) = t.initial_state {
        task = task.with_initial_state(k);
    }
    Ok((problem, task))
}

fn build_pool_and_limits(
    loc: &Locator,
    raw: &Spanned<RawPool>,
    num_qubits: usize,
) -> CliResult<(OperationPool, HardLimits)> {
    let p = raw.get_ref();
    let topology = match (*p.topology.get_ref(), &p.edges) {
        (TopologyName::Custom, Some(edges)) => Topology::Custom(edges.get_ref().clone()),
        (TopologyName::Custom, None) => return Err(loc.at(p.topology.span(), "custom topology needs `edges`")),
        (_, Some(edges)) => return Err(loc.at(edges.span(), "`edges` only applies to the custom topology")),
        (TopologyName::Line, None) => Topology::Line,
        (TopologyName::Ring, None) => Topology::Ring,
        (TopologyName::AllToAll, None) => Topology::AllToAll,
    };
    if let Some(bad) = p.gates.get_ref().iter().find(|k| k.num_wires() != 1) {
        return Err(loc.at(
            p.gates.span(),
            format!("`gates` lists single-qubit kinds; {bad} comes from the topology or `placeholder`"),
        ));
    }
    let pool = build_pool(num_qubits, p.gates.get_ref(), &topology, p.placeholder).map_err(|e| {
        let span = p.edges.as_ref().map_or(p.gates.span(), |e| e.span());
        loc.at(span, e)
    })?;
    let mut limits = HardLimits::new(*p.layers.get_ref()).map_err(|e| loc.at(p.layers.span(), e))?;
    for (&kind, &cap) in &p.caps {
        limits = limits.with_cap(kind, cap);
    }
    Ok((pool, limits))
}
