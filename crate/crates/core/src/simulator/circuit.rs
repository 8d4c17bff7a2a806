use super::gate::GateOp;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::OperationPool;
use crate::supernet::SharedParameters;

/// Resolves a layout into concrete gates, layer `i` reading slot `(i, layout[i], ..)`.
pub fn bind_circuit(
    pool: &OperationPool,
    layout: &CircuitLayout,
    params: &SharedParameters,
) -> Result<Vec<GateOp>> {
    let (p, c, _) = params.shape();
    if c != pool.size() {
        return Err(Error::Parameter(format!(
            "parameter tensor built for {c} operations, pool has {}",
            pool.size()
        )));
    }
    if layout.len() > p {
        return Err(Error::Parameter(format!(
            "layout has {} layers, parameter tensor only {p}",
            layout.len()
        )));
    }
    layout
        .iter()
        .enumerate()
        .map(|(layer, &k)| {
            let entry = pool.entry(k)?;
            let needed = entry.kind.num_params();
            let angles = params.slot(layer, k)?;
            if angles.len() < needed {
                return Err(Error::Parameter(format!(
                    "{} needs {needed} angle(s), tensor holds {}",
                    entry.kind,
                    angles.len()
                )));
            }
            Ok(GateOp::new(entry.kind, entry.wires.clone(), angles[..needed].to_vec()))
        })
        .collect()
}

/// Applies `gates` in order to a copy of `init`.
pub fn run_gates(init: &StateVector, gates: &[GateOp]) -> Result<StateVector> {
    let mut state = init.clone();
    for g in gates {
        state.apply(g)?;
    }
    Ok(state)
}

/// Runs the circuit described by `layout` with weight-shared parameters.
pub fn run_circuit(
    pool: &OperationPool,
    layout: &CircuitLayout,
    params: &SharedParameters,
    init: &StateVector,
) -> Result<StateVector> {
    let gates = bind_circuit(pool, layout, params)?;
    run_gates(init, &gates)
}
