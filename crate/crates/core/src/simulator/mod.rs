//! Dense statevector simulation.

mod circuit;
mod gate;
mod gradient;
mod observable;
mod sampling;
mod state;

pub use circuit::{bind_circuit, run_circuit, run_gates};
pub use gate::{
    dagger2, hadamard, matmul2, rot_matrix, ry_matrix, rz_matrix, u3_matrix, GateKind, GateOp,
    Matrix2,
};
pub use gradient::{loss_gradient, PARAMETER_SHIFT};
pub use observable::{expectation, PauliString, PauliSumObservable, PauliTerm};
pub use sampling::{sample, SampleHistogram};
pub use state::{apply_gate, fidelity, init_state, InitKind, StateVector, MAX_QUBITS};
