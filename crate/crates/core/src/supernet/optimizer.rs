use serde::{Deserialize, Serialize};

use super::params::SharedParameters;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerMethod {
    Adam,
    Sgd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub method: OptimizerMethod,
    pub learning_rate: f64,
    pub steps: usize,
    /// Standard deviation of Gaussian noise added to averaged gradients.
    pub gradient_noise_sigma: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: OptimizerMethod::Adam,
            learning_rate: 0.01,
            steps: 20,
            gradient_noise_sigma: 0.0,
            batch_size: 8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 || (self.learning_rate == 0.0 && self.method == OptimizerMethod::Sgd)) {
            return Err(Error::Configuration(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if !self.learning_rate.is_finite() {
            return Err(Error::Configuration("learning_rate must be finite".into()));
        }
        if !(self.gradient_noise_sigma >= 0.0 && self.gradient_noise_sigma.is_finite()) {
            return Err(Error::Configuration("gradient_noise_sigma must be >= 0".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Configuration("batch_size must be >= 1".into()));
        }
        Ok(())
    }
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPSILON: f64 = 1e-8;

/// First-order optimizer state over the whole shared tensor.
#[derive(Debug, Clone)]
pub struct Optimizer {
    method: OptimizerMethod,
    learning_rate: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Optimizer {
    pub fn new(cfg: &OptimizerConfig, params: &SharedParameters) -> Self {
        let n = params.values().len();
        Self {
            method: cfg.method,
            learning_rate: cfg.learning_rate,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    /// One descent step. Entries whose gradient has always been zero stay put.
    pub fn step(&mut self, params: &mut SharedParameters, grad: &SharedParameters) -> Result<()> {
        if params.shape() != grad.shape() {
            return Err(Error::Parameter(format!(
                "gradient shape {:?} != parameter shape {:?}",
                grad.shape(),
                params.shape()
            )));
        }
        let lr = self.learning_rate;
        match self.method {
            OptimizerMethod::Sgd => {
                for (x, g) in params.values_mut().iter_mut().zip(grad.values()) {
                    *x -= lr * g;
                }
            }
            OptimizerMethod::Adam => {
                self.t += 1;
                let bc1 = 1.0 - BETA1.powi(self.t);
                let bc2 = 1.0 - BETA2.powi(self.t);
                for (i, (x, &g)) in params.values_mut().iter_mut().zip(grad.values()).enumerate() {
                    self.m[i] = BETA1 * self.m[i] + (1.0 - BETA1) * g;
                    self.v[i] = BETA2 * self.v[i] + (1.0 - BETA2) * g * g;
                    let m_hat = self.m[i] / bc1;
                    let v_hat = self.v[i] / bc2;
                    *x -= lr * m_hat / (v_hat.sqrt() + EPSILON);
                }
            }
        }
        if !params.is_finite() {
            return Err(Error::Numeric("parameters diverged to non-finite values".into()));
        }
        Ok(())
    }
}
