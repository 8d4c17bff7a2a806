use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2x2 complex matrix in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Gate kinds understood by the simulator.
///
/// The declaration order is also the order used when building pools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    Cnot,
    Rot,
    Rz,
    Ry,
    U3,
    Placeholder,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::H,
        GateKind::Cnot,
        GateKind::Rot,
        GateKind::Rz,
        GateKind::Ry,
        GateKind::U3,
        GateKind::Placeholder,
    ];

    pub fn num_params(self) -> usize {
        match self {
            GateKind::H | GateKind::Cnot | GateKind::Placeholder => 0,
            GateKind::Rz | GateKind::Ry => 1,
            GateKind::Rot | GateKind::U3 => 3,
        }
    }

    /// Number of wires; a placeholder is attached to no wire.
    pub fn num_wires(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            GateKind::Placeholder => 0,
            _ => 1,
        }
    }

    pub fn is_parametric(self) -> bool {
        self.num_params() > 0
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::Cnot => "cnot",
            GateKind::Rot => "rot",
            GateKind::Rz => "rz",
            GateKind::Ry => "ry",
            GateKind::U3 => "u3",
            GateKind::Placeholder => "placeholder",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("cx") && *k == GateKind::Cnot))
            .ok_or_else(|| Error::Configuration(format!("unknown gate kind '{s}'")))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::Rot => "Rot",
            GateKind::Rz => "RZ",
            GateKind::Ry => "RY",
            GateKind::U3 => "U3",
            GateKind::Placeholder => "Placeholder",
        };
        f.write_str(s)
    }
}

/// A gate with bound wires and angles (radians).
///
/// For CNOT the control wire comes first. Angle order is `(phi, theta, omega)`
/// for `Rot` and `(theta, phi, lambda)` for `U3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub wires: Vec<usize>,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl GateOp {
    pub fn new(kind: GateKind, wires: Vec<usize>, params: Vec<f64>) -> Self {
        Self { kind, wires, params }
    }

    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, vec![q], vec![])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![control, target], vec![])
    }

    pub fn rot(q: usize, phi: f64, theta: f64, omega: f64) -> Self {
        Self::new(GateKind::Rot, vec![q], vec![phi, theta, omega])
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self::new(GateKind::Rz, vec![q], vec![theta])
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self::new(GateKind::Ry, vec![q], vec![theta])
    }

    pub fn u3(q: usize, theta: f64, phi: f64, lambda: f64) -> Self {
        Self::new(GateKind::U3, vec![q], vec![theta, phi, lambda])
    }

    pub fn placeholder() -> Self {
        Self::new(GateKind::Placeholder, vec![], vec![])
    }

    /// Checks wire count, distinctness and range against `num_qubits`, and the angle count.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.wires.len() != self.kind.num_wires() {
            return Err(Error::Wiring(format!(
                "{} expects {} wire(s), got {:?}",
                self.kind,
                self.kind.num_wires(),
                self.wires
            )));
        }
        for (i, &w) in self.wires.iter().enumerate() {
            if w >= num_qubits {
                return Err(Error::Wiring(format!(
                    "{} wire {w} out of range for {num_qubits} qubit(s)",
                    self.kind
                )));
            }
            if self.wires[..i].contains(&w) {
                return Err(Error::Wiring(format!("{} wires collide: {:?}", self.kind, self.wires)));
            }
        }
        if self.params.len() != self.kind.num_params() {
            return Err(Error::Parameter(format!(
                "{} expects {} angle(s), got {}",
                self.kind,
                self.kind.num_params(),
                self.params.len()
            )));
        }
        Ok(())
    }

    /// Single-qubit unitary, or `None` for CNOT and Placeholder.
    pub fn single_qubit_matrix(&self) -> Option<Matrix2> {
        let p = &self.params;
        match self.kind {
            GateKind::H => Some(hadamard()),
            GateKind::Rz => Some(rz_matrix(p[0])),
            GateKind::Ry => Some(ry_matrix(p[0])),
            GateKind::Rot => Some(rot_matrix(p[0], p[1], p[2])),
            GateKind::U3 => Some(u3_matrix(p[0], p[1], p[2])),
            GateKind::Cnot | GateKind::Placeholder => None,
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.params.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hadamard() -> Matrix2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
}

pub fn rz_matrix(theta: f64) -> Matrix2 {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn ry_matrix(theta: f64) -> Matrix2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

/// `Rot(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi)`.
pub fn rot_matrix(phi: f64, theta: f64, omega: f64) -> Matrix2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [
        [
            Complex64::from_polar(co, -(phi + omega) / 2.0),
            -Complex64::from_polar(s, (phi - omega) / 2.0),
        ],
        [
            Complex64::from_polar(s, -(phi - omega) / 2.0),
            Complex64::from_polar(co, (phi + omega) / 2.0),
        ],
    ]
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [
        [c(co, 0.0), -Complex64::from_polar(s, lambda)],
        [Complex64::from_polar(s, phi), Complex64::from_polar(co, phi + lambda)],
    ]
}

pub fn matmul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn dagger2(a: &Matrix2) -> Matrix2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}
