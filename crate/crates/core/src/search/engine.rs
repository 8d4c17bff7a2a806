use serde::Serialize;

use super::tree::{LayoutReward, SearchTree, TreeStats};
use super::SearchConfig;
use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::{HardLimits, OperationPool};
use crate::supernet::{warmup, OptimizerConfig, RandomLayoutSampler, SharedParameters, Trainer};
use crate::tasks::{Evaluation, Task};

/// Task reward of a layout under a fixed parameter tensor.
pub struct TaskReward<'a> {
    pub task: &'a Task,
    pub pool: &'a OperationPool,
    pub params: &'a SharedParameters,
}

impl LayoutReward for TaskReward<'_> {
    fn reward(&mut self, layout: &CircuitLayout) -> Result<f64> {
        Ok(self.task.evaluate(self.pool, layout, self.params)?.reward)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub reward: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    /// Highest-reward circuit seen over all iterations (empty if none ran).
    pub best_layout: CircuitLayout,
    pub best_reward: Option<f64>,
    pub best_loss: Option<f64>,
    pub best_iteration: Option<usize>,
    /// Reward of the circuit picked at each iteration.
    pub reward_trace: Vec<TracePoint>,
    pub stopped_early: bool,
    pub tree_stats: TreeStats,
}

impl SearchReport {
    /// `iteration,best_reward,stopped_early`, one row per iteration; the flag
    /// is set on the row that triggered the stop.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,best_reward,stopped_early\n");
        let last = self.reward_trace.len();
        for (i, p) in self.reward_trace.iter().enumerate() {
            let flag = self.stopped_early && i + 1 == last;
            out.push_str(&format!("{},{},{}\n", p.iteration, p.reward, flag));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub report: SearchReport,
    /// Parameters as they were when the best circuit was scored.
    pub best_params: SharedParameters,
    pub final_params: SharedParameters,
}

/// Full search with a freshly initialised parameter tensor.
pub fn run_search(
    task: &Task,
    pool: &OperationPool,
    limits: &HardLimits,
    cfg: &SearchConfig,
    opt: &OptimizerConfig,
) -> Result<SearchOutcome> {
    let params = SharedParameters::for_pool(limits.max_layers, pool, cfg.init, cfg.seed)?;
    run_search_with_params(task, pool, limits, cfg, opt, params)
}

/// Search loop: sample a batch of arcs, train the shared parameters on it,
/// then pick and score this iteration's circuit.
pub fn run_search_with_params(
    task: &Task,
    pool: &OperationPool,
    limits: &HardLimits,
    cfg: &SearchConfig,
    opt: &OptimizerConfig,
    params: SharedParameters,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    opt.validate()?;
    task.validate_pool(pool)?;
    let (p, c, _) = params.shape();
    if p != limits.max_layers || c != pool.size() {
        return Err(Error::Configuration(format!(
            "parameter tensor ({p}, {c}, _) does not match {} layers x {} operations",
            limits.max_layers,
            pool.size()
        )));
    }
    let early_stop = cfg.early_stop_reward.or(task.early_stop_reward);
    let parametric = pool.is_parametric();

    let mut params = params;
    if cfg.warmup && parametric {
        let mut sampler = RandomLayoutSampler::new(pool, limits, cfg.seed);
        params = warmup(task, pool, &mut sampler, &params, opt)?;
    }
    let mut trainer = Trainer::new(opt, &params)?;
    let mut tree = SearchTree::new(pool, limits, cfg)?;

    let mut trace = Vec::with_capacity(cfg.iterations);
    let mut best: Option<(Evaluation, CircuitLayout, usize)> = None;
    let mut best_params = params.clone();
    let mut stopped_early = false;

    for iteration in 1..=cfg.iterations {
        let mut batch = Vec::with_capacity(opt.batch_size);
        for _ in 0..opt.batch_size {
            let mut reward = TaskReward { task, pool, params: &params };
            batch.push(tree.sample_arc(&mut reward, cfg.rounds)?);
        }
        if parametric {
            trainer.update(task, pool, &batch, &mut params)?;
        }

        let mut reward = TaskReward { task, pool, params: &params };
        let layout = match cfg.nesting_level {
            0 => tree.sample_arc(&mut reward, cfg.rounds)?,
            _ => tree.exploit_arc(&mut reward, cfg.rounds)?,
        };
        let eval = task.evaluate(pool, &layout, &params)?;
        trace.push(TracePoint { iteration, reward: eval.reward, loss: eval.loss });
        if best.as_ref().is_none_or(|(b, _, _)| eval.reward > b.reward) {
            best = Some((eval, layout, iteration));
            best_params = params.clone();
        }
        if early_stop.is_some_and(|target| eval.reward >= target) {
            stopped_early = true;
            break;
        }
    }

    let report = SearchReport {
        best_layout: best.as_ref().map(|(_, l, _)| l.clone()).unwrap_or_default(),
        best_reward: best.as_ref().map(|(e, _, _)| e.reward),
        best_loss: best.as_ref().map(|(e, _, _)| e.loss),
        best_iteration: best.as_ref().map(|(_, _, i)| *i),
        reward_trace: trace,
        stopped_early,
        tree_stats: tree.stats(),
    };
    Ok(SearchOutcome { report, best_params, final_params: params })
}
