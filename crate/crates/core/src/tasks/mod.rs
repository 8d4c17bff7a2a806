//! Losses and rewards for the benchmark problems.
//!
//! Every loss is written as a smooth function of a handful of expectation
//! values of the circuit output ("components"). That split lets the
//! parameter-shift rule differentiate the components and the chain rule do
//! the rest, which matters for the VQLS cost (a ratio of two expectations).

mod maxcut;
mod oracle;
mod qec;
mod vqls;

use serde::{Deserialize, Serialize};

pub use maxcut::{maxcut_hamiltonian, Edge, Graph};
pub use oracle::{
    oracle_ground_energy, oracle_linear_solve, oracle_maxcut, MAX_ORACLE_QUBITS,
    MAX_ORACLE_VERTICES,
};
pub use qec::{qec422_input_states, qec422_reference_encoder, Qec422Payload};
pub use vqls::VqlsPayload;

use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::OperationPool;
use crate::simulator::{bind_circuit, GateKind, GateOp, InitKind, PauliSumObservable, StateVector};
use crate::supernet::SharedParameters;

/// How a loss becomes a reward (before the placeholder penalty).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardScaling {
    /// `R = -L`
    Identity,
    /// `R = exp(-10 L)`
    ExpNeg10,
    /// `R = 1 - L`
    OneMinus,
}

impl RewardScaling {
    pub fn apply(self, loss: f64) -> f64 {
        match self {
            RewardScaling::Identity => -loss,
            RewardScaling::ExpNeg10 => (-10.0 * loss).exp(),
            RewardScaling::OneMinus => 1.0 - loss,
        }
    }
}

#[derive(Debug, Clone)]
pub enum TaskPayload {
    QecEncoding422(Qec422Payload),
    Vqls(VqlsPayload),
    VqeChemistry { hamiltonian: PauliSumObservable },
    MaxCut { graph: Graph, hamiltonian: PauliSumObservable },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    /// `lambda`: `penalty_beta` times the number of placeholder layers.
    pub penalty: f64,
    pub reward: f64,
}

#[derive(Debug, Clone)]
pub struct Task {
    pub num_qubits: usize,
    pub initial_state: InitKind,
    pub penalty_beta: f64,
    pub reward_scaling: RewardScaling,
    pub early_stop_reward: Option<f64>,
    pub payload: TaskPayload,
}

impl Task {
    /// `[[4,2,2]]` encoder search: reward `exp(-10 L)`, no penalty, stop at
    /// 0.99. The exponential separates near-perfect encoders from the broad
    /// plateau at `L = 0.5` far better than `1 - L` does.
    pub fn qec422() -> Result<Self> {
        Ok(Self {
            num_qubits: 4,
            initial_state: InitKind::Zeros,
            penalty_beta: 0.0,
            reward_scaling: RewardScaling::ExpNeg10,
            early_stop_reward: Some(0.99),
            payload: TaskPayload::QecEncoding422(Qec422Payload::new()?),
        })
    }

    /// Linear-system task. The circuit acts on `|+...+>`, i.e. the fixed
    /// Hadamard layer in front of every searched circuit is folded into the
    /// initial state.
    pub fn vqls(payload: VqlsPayload) -> Result<Self> {
        Ok(Self {
            num_qubits: payload.num_qubits(),
            initial_state: InitKind::Plus,
            penalty_beta: 0.01,
            reward_scaling: RewardScaling::ExpNeg10,
            early_stop_reward: None,
            payload: TaskPayload::Vqls(payload),
        })
    }

    /// Ground-energy search from the vacuum state; reward `-E`.
    pub fn chemistry(hamiltonian: PauliSumObservable) -> Result<Self> {
        Ok(Self {
            num_qubits: hamiltonian.num_qubits(),
            initial_state: InitKind::Zeros,
            penalty_beta: 0.0,
            reward_scaling: RewardScaling::Identity,
            early_stop_reward: None,
            payload: TaskPayload::VqeChemistry { hamiltonian },
        })
    }

    /// MaxCut on `graph` starting from `|+...+>`; reward `-<H_C>`.
    pub fn maxcut(graph: Graph) -> Result<Self> {
        let hamiltonian = maxcut_hamiltonian(&graph)?;
        Ok(Self {
            num_qubits: graph.vertices,
            initial_state: InitKind::Plus,
            penalty_beta: 0.01,
            reward_scaling: RewardScaling::Identity,
            early_stop_reward: None,
            payload: TaskPayload::MaxCut { graph, hamiltonian },
        })
    }

    pub fn with_reward_scaling(mut self, scaling: RewardScaling) -> Self {
        self.reward_scaling = scaling;
        self
    }

    pub fn with_penalty(mut self, beta: f64) -> Self {
        self.penalty_beta = beta;
        self
    }

    pub fn with_early_stop(mut self, reward: Option<f64>) -> Self {
        self.early_stop_reward = reward;
        self
    }

    pub fn with_initial_state(mut self, kind: InitKind) -> Self {
        self.initial_state = kind;
        self
    }

    pub fn variant_name(&self) -> &'static str {
        match self.payload {
            TaskPayload::QecEncoding422(_) => "qec422",
            TaskPayload::Vqls(_) => "vqls",
            TaskPayload::VqeChemistry { .. } => "chemistry",
            TaskPayload::MaxCut { .. } => "maxcut",
        }
    }

    /// Checks the task against a pool: qubit counts and penalty sign.
    pub fn validate_pool(&self, pool: &OperationPool) -> Result<()> {
        if pool.num_qubits() != self.num_qubits {
            return Err(Error::Configuration(format!(
                "{} task on {} qubits, pool on {}",
                self.variant_name(),
                self.num_qubits,
                pool.num_qubits()
            )));
        }
        if !(self.penalty_beta >= 0.0 && self.penalty_beta.is_finite()) {
            return Err(Error::Configuration("penalty_beta must be >= 0".into()));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        StateVector::new(self.num_qubits, self.initial_state)
    }

    /// The expectation values the loss is built from, for a bound circuit.
    pub fn components(&self, gates: &[GateOp]) -> Result<Vec<f64>> {
        match &self.payload {
            TaskPayload::QecEncoding422(p) => Ok(vec![p.mean_fidelity(gates)?]),
            TaskPayload::Vqls(p) => {
                let x = run(&self.initial_state()?, gates)?;
                let (num, den) = p.cost_terms(&x)?;
                Ok(vec![num, den])
            }
            TaskPayload::VqeChemistry { hamiltonian } | TaskPayload::MaxCut { hamiltonian, .. } => {
                let out = run(&self.initial_state()?, gates)?;
                Ok(vec![hamiltonian.expectation(&out)?])
            }
        }
    }

    pub fn loss_from_components(&self, c: &[f64]) -> Result<f64> {
        match &self.payload {
            TaskPayload::QecEncoding422(_) => Ok(1.0 - c[0]),
            TaskPayload::Vqls(_) => vqls::local_cost(c[0], c[1]),
            TaskPayload::VqeChemistry { .. } | TaskPayload::MaxCut { .. } => Ok(c[0]),
        }
    }

    /// `dL/dc_k` at the given components.
    pub fn loss_sensitivities(&self, c: &[f64]) -> Vec<f64> {
        match &self.payload {
            TaskPayload::QecEncoding422(_) => vec![-1.0],
            TaskPayload::Vqls(_) => vec![-1.0 / c[1], c[0] / (c[1] * c[1])],
            TaskPayload::VqeChemistry { .. } | TaskPayload::MaxCut { .. } => vec![1.0],
        }
    }

    pub fn loss_of_gates(&self, gates: &[GateOp]) -> Result<f64> {
        self.loss_from_components(&self.components(gates)?)
    }

    /// Loss `L` without the placeholder penalty.
    pub fn loss(&self, pool: &OperationPool, layout: &CircuitLayout, params: &SharedParameters) -> Result<f64> {
        self.loss_of_gates(&bind_circuit(pool, layout, params)?)
    }

    /// `evaluate`: loss, penalty and reward of one layout.
    pub fn evaluate(
        &self,
        pool: &OperationPool,
        layout: &CircuitLayout,
        params: &SharedParameters,
    ) -> Result<Evaluation> {
        let loss = self.loss(pool, layout, params)?;
        if !loss.is_finite() {
            return Err(Error::Numeric(format!("loss {loss} for layout {layout}")));
        }
        let penalty = self.penalty_beta * pool.count_kind(layout, GateKind::Placeholder) as f64;
        let reward = self.reward_scaling.apply(loss) - penalty;
        Ok(Evaluation { loss, penalty, reward })
    }

    /// The state a bound circuit prepares from the task's initial state.
    pub fn output_state(&self, gates: &[GateOp]) -> Result<StateVector> {
        run(&self.initial_state()?, gates)
    }
}

fn run(init: &StateVector, gates: &[GateOp]) -> Result<StateVector> {
    crate::simulator::run_gates(init, gates)
}

/// `qec422_loss` for a bound circuit.
pub fn qec422_loss(payload: &Qec422Payload, gates: &[GateOp]) -> Result<f64> {
    Ok(1.0 - payload.mean_fidelity(gates)?)
}

/// `vqls_cost` of the state `V|init>`.
pub fn vqls_cost(payload: &VqlsPayload, state: &StateVector) -> Result<f64> {
    let (num, den) = payload.cost_terms(state)?;
    vqls::local_cost(num, den)
}

/// `chemistry_loss`: energy of the prepared state in Hartree.
pub fn chemistry_loss(hamiltonian: &PauliSumObservable, state: &StateVector) -> Result<f64> {
    hamiltonian.expectation(state)
}

/// `maxcut_loss`: `<H_C>` in the prepared state.
pub fn maxcut_loss(graph: &Graph, state: &StateVector) -> Result<f64> {
    maxcut_hamiltonian(graph)?.expectation(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pool::{build_pool, Topology};
    use crate::simulator::PauliString;

    #[test]
    fn reward_scalings() {
        assert_eq!(RewardScaling::Identity.apply(2.5), -2.5);
        assert_eq!(RewardScaling::ExpNeg10.apply(0.0), 1.0);
        assert_eq!(RewardScaling::OneMinus.apply(0.25), 0.75);
    }

    #[test]
    fn reference_layout_scores_one() {
        let task = Task::qec422().unwrap();
        let pool = build_pool(4, &[GateKind::H], &Topology::AllToAll, false).unwrap();
        let layout: Vec<usize> = qec422_reference_encoder()
            .iter()
            .map(|g| pool.find(g.kind, &g.wires).unwrap())
            .collect();
        let params = SharedParameters::zeros(6, pool.size(), 0);
        let e = task.evaluate(&pool, &layout.into(), &params).unwrap();
        assert!(e.loss.abs() < 1e-12);
        assert!((e.reward - 1.0).abs() < 1e-12);
    }

    #[test]
    fn penalty_counts_placeholders() {
        let graph = Graph::unweighted(2, &[(0, 1)]).unwrap();
        let task = Task::maxcut(graph).unwrap().with_penalty(0.25);
        let pool = build_pool(2, &[GateKind::Ry], &Topology::Line, true).unwrap();
        let ph = pool.placeholder_index().unwrap();
        let params = SharedParameters::zeros(3, pool.size(), 1);
        let e0 = task.evaluate(&pool, &vec![0].into(), &params).unwrap();
        let e2 = task.evaluate(&pool, &vec![0, ph, ph].into(), &params).unwrap();
        assert!((e0.reward - e2.reward - 0.5).abs() < 1e-15);
        assert_eq!(e2.penalty, 0.5);
        let free = Task::maxcut(Graph::unweighted(2, &[(0, 1)]).unwrap()).unwrap().with_penalty(0.0);
        let e = free.evaluate(&pool, &vec![ph].into(), &params).unwrap();
        assert_eq!(e.reward, -e.loss);
    }

    #[test]
    fn vqls_exact_solution_rewards_one() {
        let payload = VqlsPayload::new(2, vec![(1.0, PauliString::identity(2))]).unwrap();
        let task = Task::vqls(payload).unwrap().with_penalty(0.0);
        let pool = build_pool(2, &[GateKind::Rot], &Topology::Line, true).unwrap();
        let params = SharedParameters::zeros(1, pool.size(), 3);
        let e = task.evaluate(&pool, &CircuitLayout::empty(), &params).unwrap();
        assert!(e.loss.abs() < 1e-12);
        assert!((e.reward - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pool_qubit_mismatch_is_configuration_error() {
        let task = Task::qec422().unwrap();
        let pool = build_pool(3, &[GateKind::H], &Topology::AllToAll, false).unwrap();
        assert!(matches!(task.validate_pool(&pool), Err(Error::Configuration(_))));
    }
}
