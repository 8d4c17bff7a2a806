//! Parameter-shift gradients of task losses.
//!
//! Every parametric gate is a product of rotations `exp(-i a G / 2)` with
//! Pauli generators `G`, and each angle enters exactly one factor, so
//! `d<O>/da = (<O>(a + pi/2) - <O>(a - pi/2)) / 2` holds exactly for any
//! observable `O`. Task losses are smooth functions of a few such
//! expectation values ("components"); the chain rule combines them.

use std::f64::consts::FRAC_PI_2;

use super::circuit::bind_circuit;
use super::gate::GateOp;
use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::OperationPool;
use crate::supernet::SharedParameters;
use crate::tasks::Task;

pub const PARAMETER_SHIFT: f64 = FRAC_PI_2;

/// Gradient of the task loss with respect to every slot of the shared tensor.
///
/// Only slots `(i, layout[i], 0..needed)` of parametric layers are non-zero.
pub fn loss_gradient(
    task: &Task,
    pool: &OperationPool,
    layout: &CircuitLayout,
    params: &SharedParameters,
) -> Result<SharedParameters> {
    let mut gates = bind_circuit(pool, layout, params)?;
    let base = task.components(&gates)?;
    let loss = task.loss_from_components(&base)?;
    if !loss.is_finite() {
        return Err(Error::Numeric(format!("loss {loss} for layout {layout}")));
    }
    let sens = task.loss_sensitivities(&base);
    let mut grad = params.zeros_like();
    for layer in 0..gates.len() {
        for j in 0..gates[layer].params.len() {
            let d = shifted_derivative(task, &mut gates, layer, j, &sens)?;
            if !d.is_finite() {
                return Err(Error::Numeric(format!(
                    "non-finite derivative at layer {layer} angle {j} of layout {layout}"
                )));
            }
            grad.slot_mut(layer, layout[layer])?[j] = d;
        }
    }
    Ok(grad)
}

fn shifted_derivative(
    task: &Task,
    gates: &mut [GateOp],
    layer: usize,
    j: usize,
    sens: &[f64],
) -> Result<f64> {
    let original = gates[layer].params[j];
    gates[layer].params[j] = original + PARAMETER_SHIFT;
    let plus = task.components(gates);
    gates[layer].params[j] = original - PARAMETER_SHIFT;
    let minus = task.components(gates);
    gates[layer].params[j] = original;
    let (plus, minus) = (plus?, minus?);
    Ok(sens
        .iter()
        .zip(plus.iter().zip(&minus))
        .map(|(s, (p, m))| s * (p - m) / 2.0)
        .sum())
}
