//! Nested Monte-Carlo tree search over layer-wise operation choices.
//!
//! Each layer decision is treated as an independent bandit arm that receives
//! the reward of the whole circuit it took part in, so statistics of a
//! (node, action) pair are plain running means.

mod engine;
mod tree;

use serde::{Deserialize, Serialize};

pub use engine::{run_search, run_search_with_params, SearchOutcome, SearchReport, TaskReward, TracePoint};
pub use tree::{ucb_score, ArmStats, LayoutReward, NodeId, SearchTree, TreeNode, TreeStats};

use crate::error::{Error, Result};
use crate::supernet::InitScheme;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// UCB exploration weight.
    pub alpha: f64,
    pub prune_ratio: f64,
    pub min_children: usize,
    /// Simulation rounds per `sample_arc` / per level of `exploit_arc`.
    pub rounds: usize,
    /// `0`: root-only rounds when picking the iteration's circuit; `1`: rounds at every level.
    pub nesting_level: usize,
    pub iterations: usize,
    /// Overrides the task's own early-stop reward when set.
    pub early_stop_reward: Option<f64>,
    pub seed: u64,
    /// Run a supernet warm-up before the first iteration.
    pub warmup: bool,
    pub init: InitScheme,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            prune_ratio: 0.5,
            min_children: 2,
            rounds: 10,
            nesting_level: 1,
            iterations: 50,
            early_stop_reward: None,
            seed: 0,
            warmup: false,
            init: InitScheme::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Configuration(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(0.0..1.0).contains(&self.prune_ratio) {
            return Err(Error::Configuration(format!("prune_ratio must lie in [0, 1), got {}", self.prune_ratio)));
        }
        if self.min_children == 0 {
            return Err(Error::Configuration("min_children must be >= 1".into()));
        }
        if self.nesting_level > 1 {
            return Err(Error::Configuration(format!(
                "nesting_level {} not supported (0 or 1)",
                self.nesting_level
            )));
        }
        if self.early_stop_reward.is_some_and(|r| !r.is_finite()) {
            return Err(Error::Configuration("early_stop_reward must be finite".into()));
        }
        Ok(())
    }
}
