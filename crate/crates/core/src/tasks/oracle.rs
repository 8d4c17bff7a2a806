//! Brute-force reference solutions used to check search results.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::maxcut::Graph;
use super::vqls::VqlsPayload;
use crate::error::{Error, Result};
use crate::simulator::PauliSumObservable;

/// Largest register the dense oracles will build a matrix for.
pub const MAX_ORACLE_QUBITS: usize = 12;
/// Largest graph `oracle_maxcut` will enumerate.
pub const MAX_ORACLE_VERTICES: usize = 24;

/// Maximum cut weight and every bitstring (vertex 0 first) attaining it.
pub fn oracle_maxcut(graph: &Graph) -> Result<(f64, Vec<String>)> {
    let n = graph.vertices;
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::Size(format!("{n} vertices exceeds the oracle cap of {MAX_ORACLE_VERTICES}")));
    }
    let scale = 1.0 + graph.edges.iter().map(|e| e.weight.abs()).sum::<f64>();
    let mut best = f64::NEG_INFINITY;
    let mut argmax: Vec<usize> = Vec::new();
    for z in 0..(1usize << n) {
        let side = |v: usize| (z >> (n - 1 - v)) & 1;
        let cut: f64 = graph.edges.iter().filter(|e| side(e.u) != side(e.v)).map(|e| e.weight).sum();
        if cut > best + 1e-12 * scale {
            best = cut;
            argmax.clear();
            argmax.push(z);
        } else if (cut - best).abs() <= 1e-12 * scale {
            argmax.push(z);
        }
    }
    let bits = argmax.into_iter().map(|z| format!("{z:0n$b}")).collect();
    Ok((best, bits))
}

fn dense(obs: &PauliSumObservable) -> DMatrix<Complex64> {
    let rows = obs.dense_matrix();
    let dim = rows.len();
    DMatrix::from_fn(dim, dim, |r, c| rows[r][c])
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::Size(format!("{n} qubits exceeds the oracle cap of {MAX_ORACLE_QUBITS}")));
    }
    Ok(())
}

/// Smallest eigenvalue of the dense Hermitian matrix of `obs`.
pub fn oracle_ground_energy(obs: &PauliSumObservable) -> Result<f64> {
    check_qubits(obs.num_qubits())?;
    let m = dense(obs);
    let eig = m.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .copied()
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Numeric("empty spectrum".into()))
}

/// `|x_i|^2 / |x|^2` for `x = A^-1 |+...+>`.
pub fn oracle_linear_solve(payload: &VqlsPayload) -> Result<Vec<f64>> {
    let n = payload.num_qubits();
    check_qubits(n)?;
    let a = dense(payload.matrix());
    let dim = a.nrows();
    let sv = a.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if !(smax > 0.0) || smin <= 1e-12 * smax {
        return Err(Error::DegenerateSystem(format!("A is singular (sigma_min = {smin:e})")));
    }
    let b = DVector::from_element(dim, Complex64::new((dim as f64).sqrt().recip(), 0.0));
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::DegenerateSystem("LU solve failed".into()))?;
    let norm: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    Ok(x.iter().map(|v| v.norm_sqr() / norm).collect())
}
