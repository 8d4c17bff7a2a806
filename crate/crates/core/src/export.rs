//! Circuit listings for other toolchains.
//!
//! Placeholders are dropped. Circuits that start from `|+...+>` get an
//! explicit Hadamard layer so the listing acts on `|0...0>`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::simulator::{GateKind, GateOp, InitKind};

pub const QASM2_HEADER: &str = "OPENQASM 2.0;";

fn explicit_gates(num_qubits: usize, init: InitKind, gates: &[GateOp]) -> Vec<GateOp> {
    let mut out = Vec::with_capacity(gates.len() + num_qubits);
    if init == InitKind::Plus {
        out.extend((0..num_qubits).map(GateOp::h));
    }
    out.extend(gates.iter().filter(|g| g.kind != GateKind::Placeholder).cloned());
    out
}

/// OpenQASM 2.0 text. `Rot(phi, theta, omega)` becomes `rz(phi); ry(theta); rz(omega)`.
pub fn to_qasm2(num_qubits: usize, init: InitKind, gates: &[GateOp]) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "{QASM2_HEADER}").unwrap();
    writeln!(s, "include \"qelib1.inc\";").unwrap();
    writeln!(s, "qreg q[{num_qubits}];").unwrap();
    for g in explicit_gates(num_qubits, init, gates) {
        g.validate(num_qubits)?;
        let w = &g.wires;
        let p = &g.params;
        match g.kind {
            GateKind::H => writeln!(s, "h q[{}];", w[0]),
            GateKind::Cnot => writeln!(s, "cx q[{}],q[{}];", w[0], w[1]),
            GateKind::Rz => writeln!(s, "rz({}) q[{}];", p[0], w[0]),
            GateKind::Ry => writeln!(s, "ry({}) q[{}];", p[0], w[0]),
            GateKind::U3 => writeln!(s, "u3({},{},{}) q[{}];", p[0], p[1], p[2], w[0]),
            GateKind::Rot => writeln!(
                s,
                "rz({}) q[{q}];\nry({}) q[{q}];\nrz({}) q[{q}];",
                p[0],
                p[1],
                p[2],
                q = w[0]
            ),
            GateKind::Placeholder => Ok(()),
        }
        .unwrap();
    }
    Ok(s)
}

/// One gate per line, e.g. `H 3`, `CNOT 0 2`, `Rot(0.1, 0.2, 0.3) 1`.
pub fn to_text(num_qubits: usize, init: InitKind, gates: &[GateOp]) -> Result<String> {
    let mut s = String::new();
    for g in explicit_gates(num_qubits, init, gates) {
        g.validate(num_qubits)?;
        writeln!(s, "{g}").unwrap();
    }
    Ok(s)
}

fn parse_wire(token: &str, line: usize) -> Result<usize> {
    token
        .trim()
        .strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: bad qubit reference '{token}'")))
}

/// Reads back the subset of OpenQASM 2.0 that [`to_qasm2`] writes.
/// Returns the register size and the gates (acting on `|0...0>`).
pub fn parse_qasm2(text: &str) -> Result<(usize, Vec<GateOp>)> {
    let mut num_qubits = None;
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() || line == QASM2_HEADER || line.starts_with("include") {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| Error::Parse(format!("line {line_no}: missing ';'")))?;
        if let Some(reg) = stmt.strip_prefix("qreg ") {
            num_qubits = Some(parse_wire(reg, line_no)?);
            continue;
        }
        let (head, args) = stmt
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected '<gate> <qubits>'")))?;
        let (name, angles) = match head.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("line {line_no}: unclosed '('")))?;
                let angles = inner
                    .split(',')
                    .map(|a| a.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse(format!("line {line_no}: {e}")))?;
                (name, angles)
            }
            None => (head, Vec::new()),
        };
        let wires = args.split(',').map(|t| parse_wire(t, line_no)).collect::<Result<Vec<_>>>()?;
        let kind = match name {
            "h" => GateKind::H,
            "cx" => GateKind::Cnot,
            "rz" => GateKind::Rz,
            "ry" => GateKind::Ry,
            "u3" => GateKind::U3,
            other => return Err(Error::Parse(format!("line {line_no}: unsupported gate '{other}'"))),
        };
        let gate = GateOp::new(kind, wires, angles);
        let n = num_qubits.ok_or_else(|| Error::Parse(format!("line {line_no}: gate before qreg")))?;
        gate.validate(n).map_err(|e| Error::Parse(format!("line {line_no}: {e}")))?;
        gates.push(gate);
    }
    let n = num_qubits.ok_or_else(|| Error::Parse("no qreg declaration".into()))?;
    Ok((n, gates))
}
