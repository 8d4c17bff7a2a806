use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gate::{GateKind, GateOp, Matrix2};
use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// `|0...0>`
    Zeros,
    /// `|+...+>`
    Plus,
}

/// Dense pure state of `num_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the amplitude index, so the
/// bitstring of basis state `i` reads qubit 0 first.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(num_qubits: usize, kind: InitKind) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amps = match kind {
            InitKind::Zeros => {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[0] = Complex64::new(1.0, 0.0);
                v
            }
            InitKind::Plus => vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim],
        };
        Ok(Self { num_qubits, amps })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Size(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Basis state from a bitstring such as `"0110"` (qubit 0 leftmost).
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::Parse(format!("not a bitstring: '{bits}'")))?;
        Self::basis(bits.len(), index)
    }

    /// Takes raw amplitudes; the length must be a power of two. No normalisation is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Size(format!("amplitude count {dim} is not a power of two >= 2")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_size(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    /// Tensor product `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        check_size(self.num_qubits + other.num_qubits)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { num_qubits: self.num_qubits + other.num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Bit mask selecting `qubit` in an amplitude index.
    pub fn qubit_mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn check_same_size(&self, other: &StateVector) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Size(format!(
                "qubit count mismatch: {} vs {}",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(())
    }

    /// Applies `gate` in place after validating its wiring.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &GateOp) {
        match gate.kind {
            GateKind::Placeholder => {}
            GateKind::Cnot => self.apply_cnot(gate.wires[0], gate.wires[1]),
            _ => {
                let m = gate.single_qubit_matrix().expect("single-qubit kind");
                self.apply_single(gate.wires[0], &m);
            }
        }
    }

    pub fn apply_single(&mut self, qubit: usize, m: &Matrix2) {
        let mask = self.qubit_mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let cm = self.qubit_mask(control);
        let tm = self.qubit_mask(target);
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    /// Bitstring for basis index `i`, qubit 0 leftmost.
    pub fn bitstring(&self, i: usize) -> String {
        format!("{:0width$b}", i, width = self.num_qubits)
    }
}

/// `init_state`: builds `|0...0>` or `|+...+>`.
pub fn init_state(num_qubits: usize, kind: InitKind) -> Result<StateVector> {
    StateVector::new(num_qubits, kind)
}

/// `apply_gate`: returns a new state with `gate` applied.
pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `|<a|b>|^2`
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::Size(format!(
            "qubit count {num_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}
