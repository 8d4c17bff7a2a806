//! Automated design of variational quantum circuits.
//!
//! A circuit is a fixed-length list of choices from an [`OperationPool`].
//! Layouts are searched with a nested Monte-Carlo tree search whose per-layer
//! bandit statistics are all credited with the reward of the whole circuit.
//! Parameters of every candidate circuit live in one weight-shared tensor
//! ([`SharedParameters`]) keyed by `(layer, operation)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`simulator`]: dense statevector simulation, Pauli-sum observables,
//!   sampling and parameter-shift gradients.
//! - [`pool`]: operation pool construction and hard limits.
//! - [`supernet`]: the shared parameter tensor, warm-up and fine-tuning.
//! - [`search`]: the tree, UCB selection, pruning and the outer search loop.
//! - [`tasks`]: losses and rewards for the benchmark problems, plus brute-force
//!   oracles used for verification.
//! - [`export`]: OpenQASM 2.0 and plain-text circuit listings.

pub mod error;
pub mod export;
pub mod layout;
pub mod pool;
pub mod search;
pub mod simulator;
pub mod supernet;
pub mod tasks;

pub use error::{Error, Result};
pub use layout::CircuitLayout;
pub use pool::{allowed_actions, build_pool, HardLimits, OperationPool, PoolEntry, Topology};
pub use search::{
    run_search, run_search_with_params, ucb_score, LayoutReward, SearchConfig, SearchOutcome, SearchReport, SearchTree, TaskReward,
};
pub use simulator::{
    bind_circuit, fidelity, run_gates, sample, GateKind, GateOp, InitKind, PauliString, PauliSumObservable, PauliTerm, SampleHistogram,
    StateVector,
};
pub use supernet::{
    finetune, init_params, param_slice, warmup, InitScheme, OptimizerConfig, OptimizerMethod,
    SharedParameters,
};
pub use tasks::{Evaluation, Graph, RewardScaling, Task, TaskPayload, VqlsPayload};
