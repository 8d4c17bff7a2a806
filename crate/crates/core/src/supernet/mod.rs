//! The weight-shared parameter tensor and its training loops.

mod optimizer;
mod params;
mod training;

pub use optimizer::{Optimizer, OptimizerConfig, OptimizerMethod};
pub use params::{init_params, param_slice, InitScheme, SharedParameters};
pub use training::{
    batch_gradient, finetune, warmup, LayoutSampler, RandomLayoutSampler, Trainer,
};
