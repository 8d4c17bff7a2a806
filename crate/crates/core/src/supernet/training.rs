use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::optimizer::{Optimizer, OptimizerConfig};
use super::params::SharedParameters;
use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::{allowed_actions, HardLimits, OperationPool};
use crate::simulator::loss_gradient;
use crate::tasks::Task;

/// Anything that can hand out layouts for gradient batches.
pub trait LayoutSampler {
    fn sample_layout(&mut self) -> Result<CircuitLayout>;
}

/// Uniform random descent through `allowed_actions`.
pub struct RandomLayoutSampler<'a> {
    pool: &'a OperationPool,
    limits: &'a HardLimits,
    rng: ChaCha8Rng,
}

impl<'a> RandomLayoutSampler<'a> {
    pub fn new(pool: &'a OperationPool, limits: &'a HardLimits, seed: u64) -> Self {
        Self { pool, limits, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl LayoutSampler for RandomLayoutSampler<'_> {
    fn sample_layout(&mut self) -> Result<CircuitLayout> {
        let mut layout = CircuitLayout::empty();
        while layout.len() < self.limits.max_layers {
            let allowed = allowed_actions(&layout, self.pool, self.limits)?;
            if allowed.is_empty() {
                return Err(Error::DeadEnd(layout.into_inner()));
            }
            layout.push(allowed[self.rng.gen_range(0..allowed.len())]);
        }
        Ok(layout)
    }
}

/// Elementwise mean of the per-layout loss gradients.
///
/// Gradients are evaluated in parallel and reduced in `layouts` order.
pub fn batch_gradient(
    task: &Task,
    pool: &OperationPool,
    layouts: &[CircuitLayout],
    params: &SharedParameters,
) -> Result<SharedParameters> {
    if layouts.is_empty() {
        return Err(Error::Parameter("empty gradient batch".into()));
    }
    let grads: Vec<SharedParameters> = layouts
        .par_iter()
        .map(|layout| loss_gradient(task, pool, layout, params))
        .collect::<Result<_>>()?;
    let mut mean = params.zeros_like();
    let scale = 1.0 / layouts.len() as f64;
    for g in &grads {
        for (m, x) in mean.values_mut().iter_mut().zip(g.values()) {
            *m += x * scale;
        }
    }
    Ok(mean)
}

/// Optimizer state plus the noise source, shared by warm-up and search updates.
pub struct Trainer {
    optimizer: Optimizer,
    noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
}

impl Trainer {
    pub fn new(cfg: &OptimizerConfig, params: &SharedParameters) -> Result<Self> {
        cfg.validate()?;
        let noise = if cfg.gradient_noise_sigma > 0.0 {
            Some(
                Normal::new(0.0, cfg.gradient_noise_sigma)
                    .map_err(|e| Error::Configuration(format!("gradient noise: {e}")))?,
            )
        } else {
            None
        };
        Ok(Self {
            optimizer: Optimizer::new(cfg, params),
            noise,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15),
        })
    }

    /// Averaged gradient over `layouts`, optional noise on the slots they
    /// touch, then one optimizer step.
    pub fn update(
        &mut self,
        task: &Task,
        pool: &OperationPool,
        layouts: &[CircuitLayout],
        params: &mut SharedParameters,
    ) -> Result<()> {
        let mut grad = batch_gradient(task, pool, layouts, params)?;
        if let Some(normal) = self.noise {
            let mut touched: Vec<usize> = Vec::new();
            for layout in layouts {
                touched.extend(params.touched_indices(pool, layout)?);
            }
            touched.sort_unstable();
            touched.dedup();
            let values = grad.values_mut();
            for i in touched {
                values[i] += normal.sample(&mut self.rng);
            }
        }
        self.optimizer.step(params, &grad)
    }
}

/// `warmup`: `cfg.steps` noisy averaged-gradient updates on batches drawn
/// from `sampler`.
pub fn warmup(
    task: &Task,
    pool: &OperationPool,
    sampler: &mut dyn LayoutSampler,
    params: &SharedParameters,
    cfg: &OptimizerConfig,
) -> Result<SharedParameters> {
    let mut params = params.clone();
    let mut trainer = Trainer::new(cfg, &params)?;
    for _ in 0..cfg.steps {
        let batch = (0..cfg.batch_size)
            .map(|_| sampler.sample_layout())
            .collect::<Result<Vec<_>>>()?;
        trainer.update(task, pool, &batch, &mut params)?;
    }
    Ok(params)
}

/// `finetune`: plain gradient descent on one fixed layout.
///
/// Returns the updated tensor and the loss before every step plus the final loss.
pub fn finetune(
    task: &Task,
    pool: &OperationPool,
    layout: &CircuitLayout,
    params: &SharedParameters,
    cfg: &OptimizerConfig,
) -> Result<(SharedParameters, Vec<f64>)> {
    cfg.validate()?;
    let mut params = params.clone();
    let mut optimizer = Optimizer::new(cfg, &params);
    let mut trace = Vec::with_capacity(cfg.steps + 1);
    let initial = task.loss(pool, layout, &params)?;
    check_finite(initial, 0)?;
    trace.push(initial);
    for step in 1..=cfg.steps {
        let grad = loss_gradient(task, pool, layout, &params)?;
        optimizer.step(&mut params, &grad)?;
        let loss = task.loss(pool, layout, &params)?;
        check_finite(loss, step)?;
        trace.push(loss);
    }
    Ok((params, trace))
}

fn check_finite(loss: f64, step: usize) -> Result<()> {
    if loss.is_finite() {
        Ok(())
    } else {
        Err(Error::Numeric(format!("loss diverged to {loss} at step {step}")))
    }
}
