//! Self-contained circuit files.
//!
//! A circuit file carries the problem data inline together with the pool,
//! the hard limits, the layout and the full parameter tensor, so fine-tuning,
//! sampling, evaluation and export need nothing else.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qas_core::{
    bind_circuit, CircuitLayout, Evaluation, GateOp, Graph, HardLimits, InitKind, OperationPool, OptimizerConfig,
    PauliSumObservable, PoolEntry, RewardScaling, SharedParameters, Task, VqlsPayload,
};

use crate::error::{CliError, CliResult};

/// Problem data, stored inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Problem {
    QecEncoding422,
    /// `A` as a Pauli sum; `|b>` is always `|+...+>`.
    Vqls { a: PauliSumObservable },
    VqeChemistry { hamiltonian: PauliSumObservable },
    MaxCut { graph: Graph },
}

impl Problem {
    /// The task with its built-in reward settings.
    pub fn default_task(&self) -> qas_core::Result<Task> {
        match self {
            Problem::QecEncoding422 => Task::qec422(),
            Problem::Vqls { a } => Task::vqls(VqlsPayload::from_observable(a.clone())?),
            Problem::VqeChemistry { hamiltonian } => Task::chemistry(hamiltonian.clone()),
            Problem::MaxCut { graph } => Task::maxcut(graph.clone()),
        }
    }
}

/// A problem plus the reward settings actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub problem: Problem,
    pub penalty_beta: f64,
    pub reward_scaling: RewardScaling,
    pub early_stop_reward: Option<f64>,
    pub initial_state: InitKind,
}

impl TaskSpec {
    pub fn from_task(problem: Problem, task: &Task) -> Self {
        Self {
            problem,
            penalty_beta: task.penalty_beta,
            reward_scaling: task.reward_scaling,
            early_stop_reward: task.early_stop_reward,
            initial_state: task.initial_state,
        }
    }

    pub fn build(&self) -> qas_core::Result<Task> {
        Ok(self
            .problem
            .default_task()?
            .with_penalty(self.penalty_beta)
            .with_reward_scaling(self.reward_scaling)
            .with_early_stop(self.early_stop_reward)
            .with_initial_state(self.initial_state))
    }
}

/// On-disk form of a searched (and possibly fine-tuned) circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub task: TaskSpec,
    pub num_qubits: usize,
    pub pool: Vec<PoolEntry>,
    pub limits: HardLimits,
    pub layout: CircuitLayout,
    pub parameters: SharedParameters,
    /// The bound circuit, for readers; checked against the tensor on load.
    pub gates: Vec<GateOp>,
    /// Defaults for `finetune`.
    pub finetune: OptimizerConfig,
    pub loss: f64,
    pub penalty: f64,
    pub reward: f64,
}

/// A circuit file together with the objects rebuilt from it.
#[derive(Debug, Clone)]
pub struct LoadedCircuit {
    pub file: CircuitFile,
    pub task: Task,
    pub pool: OperationPool,
}

impl CircuitFile {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        task: TaskSpec,
        pool: &OperationPool,
        limits: &HardLimits,
        layout: CircuitLayout,
        parameters: SharedParameters,
        finetune: OptimizerConfig,
        eval: Evaluation,
    ) -> qas_core::Result<Self> {
        let gates = bind_circuit(pool, &layout, &parameters)?;
        Ok(Self {
            task,
            num_qubits: pool.num_qubits(),
            pool: pool.entries().to_vec(),
            limits: limits.clone(),
            layout,
            parameters,
            gates,
            finetune,
            loss: eval.loss,
            penalty: eval.penalty,
            reward: eval.reward,
        })
    }

    pub fn to_json(&self) -> CliResult<String> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Core(e.into()))
    }

    /// Reads and cross-checks a circuit file; any inconsistency is an input error.
    pub fn load(path: &Path) -> CliResult<LoadedCircuit> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: CircuitFile = serde_json::from_str(&text).map_err(|e| CliError::input(path, e))?;
        file.rebuild().map_err(|e| CliError::input(path, e))
    }

    fn rebuild(self) -> qas_core::Result<LoadedCircuit> {
        use qas_core::Error;
        let task = self.task.build()?;
        let pool = OperationPool::from_entries(self.num_qubits, self.pool.clone())?;
        task.validate_pool(&pool)?;
        pool.validate_layout(&self.layout)?;
        if self.layout.len() != self.limits.max_layers || !self.limits.admits(&pool, &self.layout) {
            return Err(Error::Configuration(format!("layout {} violates the hard limits", self.layout)));
        }
        let (p, c, _) = self.parameters.shape();
        if p != self.limits.max_layers || c != pool.size() {
            return Err(Error::Configuration(format!(
                "parameter tensor ({p}, {c}, _) does not match {} layers x {} operations",
                self.limits.max_layers,
                pool.size()
            )));
        }
        if bind_circuit(&pool, &self.layout, &self.parameters)? != self.gates {
            return Err(Error::Configuration("gate listing disagrees with layout and parameters".into()));
        }
        self.finetune.validate()?;
        Ok(LoadedCircuit { file: self, task, pool })
    }
}

impl LoadedCircuit {
    /// Loss, penalty and reward recomputed from the stored tensor.
    pub fn evaluate(&self) -> qas_core::Result<Evaluation> {
        self.task.evaluate(&self.pool, &self.file.layout, &self.file.parameters)
    }

    /// The state the circuit prepares from the task's initial state.
    pub fn output_state(&self) -> qas_core::Result<qas_core::StateVector> {
        self.task.output_state(&self.file.gates)
    }
}
