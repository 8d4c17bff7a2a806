//! `[[4,2,2]]` encoder: match a reference encoder on a fixed input set.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::Result;
use crate::simulator::{fidelity, run_gates, GateOp, StateVector};

/// The hand-designed encoder the search tries to reproduce.
pub fn qec422_reference_encoder() -> Vec<GateOp> {
    vec![
        GateOp::h(3),
        GateOp::cnot(0, 2),
        GateOp::cnot(1, 2),
        GateOp::cnot(3, 2),
        GateOp::cnot(3, 1),
        GateOp::cnot(3, 0),
    ]
}

/// The seven single-qubit states inputs are drawn from:
/// `|0>, |1>, |+>, |->, |+i>, |-i>, |T>`.
pub fn single_qubit_inputs() -> Vec<[Complex64; 2]> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, FRAC_1_SQRT_2);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    vec![
        [one, zero],
        [zero, one],
        [r, r],
        [r, -r],
        [r, i],
        [r, -i],
        [r, Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4)],
    ]
}

/// All 49 inputs `|a> (x) |b> (x) |00>`, with `a` on qubit 0 and `b` on qubit 1.
pub fn qec422_input_states() -> Result<Vec<StateVector>> {
    let singles = single_qubit_inputs();
    let ancilla = StateVector::basis(2, 0)?;
    let mut out = Vec::with_capacity(singles.len() * singles.len());
    for a in &singles {
        for b in &singles {
            let first = StateVector::from_amplitudes(a.to_vec())?;
            let second = StateVector::from_amplitudes(b.to_vec())?;
            out.push(first.tensor(&second)?.tensor(&ancilla)?);
        }
    }
    Ok(out)
}

/// Inputs with their reference encodings precomputed.
#[derive(Debug, Clone)]
pub struct Qec422Payload {
    inputs: Vec<StateVector>,
    targets: Vec<StateVector>,
}

impl Qec422Payload {
    pub fn new() -> Result<Self> {
        let inputs = qec422_input_states()?;
        let encoder = qec422_reference_encoder();
        let targets = inputs.iter().map(|s| run_gates(s, &encoder)).collect::<Result<_>>()?;
        Ok(Self { inputs, targets })
    }

    pub fn inputs(&self) -> &[StateVector] {
        &self.inputs
    }

    pub fn targets(&self) -> &[StateVector] {
        &self.targets
    }

    /// Per-input fidelities `|<target_k|U|input_k>|^2`.
    pub fn fidelities(&self, gates: &[GateOp]) -> Result<Vec<f64>> {
        self.inputs
            .iter()
            .zip(&self.targets)
            .map(|(input, target)| fidelity(&run_gates(input, gates)?, target))
            .collect()
    }

    pub fn mean_fidelity(&self, gates: &[GateOp]) -> Result<f64> {
        let f = self.fidelities(gates)?;
        Ok(f.iter().sum::<f64>() / f.len() as f64)
    }
}
