//! Variational linear solver with a local cost against `|b> = H^n|0>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{PauliString, PauliSumObservable, PauliTerm, StateVector};

/// `A = sum_l c_l A_l` with Pauli-string `A_l`; `|b>` is always `|+...+>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqlsPayload {
    a: PauliSumObservable,
}

impl VqlsPayload {
    pub fn new(num_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Configuration("A needs at least one term".into()));
        }
        let terms = terms.into_iter().map(|(coeff, pauli)| PauliTerm { coeff, pauli }).collect();
        Ok(Self { a: PauliSumObservable::new(num_qubits, terms)? })
    }

    pub fn from_observable(a: PauliSumObservable) -> Result<Self> {
        if a.terms().is_empty() {
            return Err(Error::Configuration("A needs at least one term".into()));
        }
        Ok(Self { a })
    }

    /// `A = zeta I + J X_0 + J X_1 + eta Z_2 Z_3` on four qubits.
    pub fn benchmark(zeta: f64, j: f64, eta: f64) -> Result<Self> {
        let a = PauliSumObservable::from_words(4, &[(zeta, "IIII"), (j, "XIII"), (j, "IXII"), (eta, "IIZZ")])?;
        Self::from_observable(a)
    }

    pub fn num_qubits(&self) -> usize {
        self.a.num_qubits()
    }

    pub fn matrix(&self) -> &PauliSumObservable {
        &self.a
    }

    /// `A|x>`
    pub fn apply_a(&self, x: &StateVector) -> Result<StateVector> {
        let mut out = vec![Complex64::new(0.0, 0.0); x.dim()];
        for t in self.a.terms() {
            let px = t.pauli.apply(x)?;
            for (o, v) in out.iter_mut().zip(px.amplitudes()) {
                *o += v * t.coeff;
            }
        }
        StateVector::from_amplitudes(out)
    }

    /// Numerator `N = <y|(1/2 + 1/(2n) sum_j X_j)|y>` and denominator
    /// `D = <y|y>` of the local cost, with `y = A|x>`.
    pub fn cost_terms(&self, x: &StateVector) -> Result<(f64, f64)> {
        let n = self.num_qubits();
        if x.num_qubits() != n {
            return Err(Error::Size(format!("VQLS on {n} qubits, state on {}", x.num_qubits())));
        }
        let y = self.apply_a(x)?;
        let den = y.norm_sqr();
        let mut num = 0.5 * den;
        for j in 0..n {
            let xj = PauliString::from_sparse(n, &[(j, 'X')])?;
            num += xj.expectation_complex(&y)?.re / (2.0 * n as f64);
        }
        Ok((num, den))
    }
}

/// `C_L = 1 - N / D`, clamped to `[0, 1]` up to rounding.
pub(crate) fn local_cost(num: f64, den: f64) -> Result<f64> {
    if den.abs() < 1e-12 {
        return Err(Error::DegenerateSystem(format!("<y|y> = {den:e}")));
    }
    Ok((1.0 - num / den).clamp(0.0, 1.0 + 1e-9))
}
