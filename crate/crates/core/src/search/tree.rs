use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::SearchConfig;
use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::{allowed_actions, HardLimits, OperationPool};

/// Index of a node in the tree arena. The root is always `0`.
pub type NodeId = usize;

/// `R + alpha * sqrt(2 ln n_i / n_j)`, or `+inf` for an arm never pulled.
pub fn ucb_score(avg_reward: f64, node_visits: u64, arm_pulls: u64, alpha: f64) -> f64 {
    if arm_pulls == 0 {
        return f64::INFINITY;
    }
    if alpha == 0.0 {
        return avg_reward;
    }
    let ln_ni = (node_visits.max(1) as f64).ln();
    avg_reward + alpha * (2.0 * ln_ni / arm_pulls as f64).sqrt()
}

/// Statistics of one action taken from one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmStats {
    pub pulls: u64,
    pub avg_reward: f64,
    pub child: NodeId,
    /// Pruned arms keep their statistics but are never selected again.
    pub pruned: bool,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    prefix: CircuitLayout,
    parent: Option<(NodeId, usize)>,
    visits: u64,
    allowed: Vec<usize>,
    arms: BTreeMap<usize, ArmStats>,
}

impl TreeNode {
    pub fn prefix(&self) -> &CircuitLayout {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    /// Parent node and the action that led here.
    pub fn parent(&self) -> Option<(NodeId, usize)> {
        self.parent
    }

    /// `n_i`
    pub fn visits(&self) -> u64 {
        self.visits
    }

    /// Actions permitted from this prefix, fixed when the node was created.
    pub fn allowed(&self) -> &[usize] {
        &self.allowed
    }

    pub fn arms(&self) -> &BTreeMap<usize, ArmStats> {
        &self.arms
    }

    pub fn arm(&self, action: usize) -> Option<&ArmStats> {
        self.arms.get(&action)
    }

    pub fn is_fully_expanded(&self) -> bool {
        self.arms.len() == self.allowed.len()
    }

    /// Visit-weighted mean reward over all arms, pruned ones included.
    pub fn avg_reward(&self) -> Option<f64> {
        let pulls: u64 = self.arms.values().map(|a| a.pulls).sum();
        if pulls == 0 {
            return None;
        }
        Some(self.arms.values().map(|a| a.pulls as f64 * a.avg_reward).sum::<f64>() / pulls as f64)
    }
}

/// Debug counters written next to a search report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub pruned_arms: usize,
    pub max_depth: usize,
    pub root_visits: u64,
    pub simulations: u64,
}

/// Anything that can score a complete layout.
pub trait LayoutReward {
    fn reward(&mut self, layout: &CircuitLayout) -> Result<f64>;
}

impl<F: FnMut(&CircuitLayout) -> Result<f64>> LayoutReward for F {
    fn reward(&mut self, layout: &CircuitLayout) -> Result<f64> {
        self(layout)
    }
}

/// Arena-backed search tree over layer-wise operation choices.
#[derive(Debug, Clone)]
pub struct SearchTree {
    pool: OperationPool,
    limits: HardLimits,
    alpha: f64,
    prune_ratio: f64,
    min_children: usize,
    nodes: Vec<TreeNode>,
    rng: ChaCha8Rng,
    pruned_arms: usize,
    simulations: u64,
}

impl SearchTree {
    pub fn new(pool: &OperationPool, limits: &HardLimits, cfg: &SearchConfig) -> Result<Self> {
        cfg.validate()?;
        let mut tree = Self {
            pool: pool.clone(),
            limits: limits.clone(),
            alpha: cfg.alpha,
            prune_ratio: cfg.prune_ratio,
            min_children: cfg.min_children,
            nodes: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            pruned_arms: 0,
            simulations: 0,
        };
        tree.push_node(CircuitLayout::empty(), None)?;
        Ok(tree)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn max_layers(&self) -> usize {
        self.limits.max_layers
    }

    /// Number of leaf evaluations so far.
    pub fn simulations(&self) -> u64 {
        self.simulations
    }

    pub fn stats(&self) -> TreeStats {
        TreeStats {
            nodes: self.nodes.len(),
            pruned_arms: self.pruned_arms,
            max_depth: self.nodes.iter().map(TreeNode::depth).max().unwrap_or(0),
            root_visits: self.nodes[0].visits,
            simulations: self.simulations,
        }
    }

    fn push_node(&mut self, prefix: CircuitLayout, parent: Option<(NodeId, usize)>) -> Result<NodeId> {
        let allowed = if prefix.len() < self.limits.max_layers {
            allowed_actions(&prefix, &self.pool, &self.limits)?
        } else {
            Vec::new()
        };
        self.nodes.push(TreeNode { prefix, parent, visits: 0, allowed, arms: BTreeMap::new() });
        Ok(self.nodes.len() - 1)
    }

    fn expand(&mut self, id: NodeId) -> Result<NodeId> {
        let node = &self.nodes[id];
        let open: Vec<usize> = node.allowed.iter().copied().filter(|a| !node.arms.contains_key(a)).collect();
        let action = open[self.rng.gen_range(0..open.len())];
        let prefix = node.prefix.extended(action);
        let child = self.push_node(prefix, Some((id, action)))?;
        self.nodes[id].arms.insert(action, ArmStats { pulls: 0, avg_reward: 0.0, child, pruned: false });
        Ok(child)
    }

    /// One step down from `id`: expand an untried action if any remain,
    /// otherwise prune and follow the best-scoring surviving arm.
    pub fn select_node(&mut self, id: NodeId) -> Result<NodeId> {
        let node = &self.nodes[id];
        if node.depth() >= self.limits.max_layers {
            return Err(Error::State(format!("node {id} is a leaf at depth {}", node.depth())));
        }
        if node.allowed.is_empty() {
            return Err(Error::DeadEnd(node.prefix.to_vec()));
        }
        if !node.is_fully_expanded() {
            return self.expand(id);
        }
        self.prune_children(id);
        let node = &self.nodes[id];
        let mut best: Option<(f64, NodeId)> = None;
        for arm in node.arms.values().filter(|a| !a.pruned) {
            let score = ucb_score(arm.avg_reward, node.visits, arm.pulls, self.alpha);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, arm.child));
            }
        }
        best.map(|(_, child)| child).ok_or_else(|| Error::DeadEnd(node.prefix.to_vec()))
    }

    /// Marks arms whose mean reward is below `prune_ratio` times the node's
    /// mean, lowest first, never leaving fewer than `min_children` live arms.
    /// Arms that were never pulled are left alone.
    pub fn prune_children(&mut self, id: NodeId) {
        let node = &self.nodes[id];
        let Some(node_avg) = node.avg_reward() else {
            return;
        };
        let threshold = self.prune_ratio * node_avg;
        let mut live = node.arms.values().filter(|a| !a.pruned).count();
        let mut candidates: Vec<(f64, usize)> = node
            .arms
            .iter()
            .filter(|(_, a)| !a.pruned && a.pulls > 0 && a.avg_reward < threshold)
            .map(|(&k, a)| (a.avg_reward, k))
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let node = &mut self.nodes[id];
        for (_, action) in candidates {
            if live <= self.min_children {
                break;
            }
            if let Some(arm) = node.arms.get_mut(&action) {
                arm.pruned = true;
                live -= 1;
                self.pruned_arms += 1;
            }
        }
    }

    /// Credits `reward` to every (node, action) pair from the root to `leaf`.
    pub fn backpropagate(&mut self, leaf: NodeId, reward: f64) {
        let mut cur = leaf;
        while let Some((parent, action)) = self.nodes[cur].parent {
            let node = &mut self.nodes[parent];
            node.visits += 1;
            let arm = node.arms.get_mut(&action).expect("arc action recorded on parent");
            arm.pulls += 1;
            arm.avg_reward += (reward - arm.avg_reward) / arm.pulls as f64;
            cur = parent;
        }
    }

    /// Follows `select_node` from `start` until a full-length layout.
    pub fn descend(&mut self, start: NodeId) -> Result<NodeId> {
        let mut cur = start;
        while self.nodes[cur].depth() < self.limits.max_layers {
            cur = self.select_node(cur)?;
        }
        Ok(cur)
    }

    /// Descend from `start`, score the leaf, back-propagate the reward.
    pub fn execute_single_round(&mut self, start: NodeId, reward: &mut dyn LayoutReward) -> Result<f64> {
        let leaf = self.descend(start)?;
        let r = reward.reward(&self.nodes[leaf].prefix)?;
        if !r.is_finite() {
            return Err(Error::Numeric(format!("reward {r} for layout {}", self.nodes[leaf].prefix)));
        }
        self.simulations += 1;
        self.backpropagate(leaf, r);
        Ok(r)
    }

    /// `rounds` single rounds from the root, then one policy descent.
    pub fn sample_arc(&mut self, reward: &mut dyn LayoutReward, rounds: usize) -> Result<CircuitLayout> {
        for _ in 0..rounds {
            self.execute_single_round(0, reward)?;
        }
        let leaf = self.descend(0)?;
        Ok(self.nodes[leaf].prefix.clone())
    }

    /// At every level, `rounds` single rounds from the current node and then
    /// one `select_node` step.
    pub fn exploit_arc(&mut self, reward: &mut dyn LayoutReward, rounds: usize) -> Result<CircuitLayout> {
        let mut cur = 0;
        while self.nodes[cur].depth() < self.limits.max_layers {
            for _ in 0..rounds {
                self.execute_single_round(cur, reward)?;
            }
            cur = self.select_node(cur)?;
        }
        Ok(self.nodes[cur].prefix.clone())
    }
}
