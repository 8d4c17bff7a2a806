//! Pauli strings and real linear combinations of them.
//!
//! The JSON form shared with the Hamiltonian exporter is
//! `{"num_qubits": n, "terms": [{"coeff": c, "pauli": "XXIZ"}]}` with the
//! Pauli word indexed qubit 0 first.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::state::StateVector;
use crate::error::{Error, Result};

/// A tensor product of single-qubit Paulis, stored as X/Z bit masks over
/// amplitude indices (qubit 0 is the most significant bit).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    word: String,
    x_mask: usize,
    z_mask: usize,
    y_count: u32,
}

impl PauliString {
    pub fn parse(word: &str) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::Parse("empty Pauli word".into()));
        }
        let (mut x_mask, mut z_mask, mut y_count) = (0usize, 0usize, 0u32);
        for (q, ch) in word.chars().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match ch {
                'I' => {}
                'X' => x_mask |= bit,
                'Z' => z_mask |= bit,
                'Y' => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
                other => return Err(Error::Parse(format!("invalid Pauli letter '{other}' in '{word}'"))),
            }
        }
        Ok(Self { word: word.to_string(), x_mask, z_mask, y_count })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self::parse(&"I".repeat(num_qubits)).expect("identity word")
    }

    /// Builds a word of length `num_qubits` with the given letters on the given qubits.
    pub fn from_sparse(num_qubits: usize, ops: &[(usize, char)]) -> Result<Self> {
        let mut chars = vec!['I'; num_qubits];
        for &(q, ch) in ops {
            if q >= num_qubits {
                return Err(Error::Size(format!("qubit {q} outside {num_qubits}-qubit word")));
            }
            chars[q] = ch;
        }
        Self::parse(&chars.into_iter().collect::<String>())
    }

    pub fn num_qubits(&self) -> usize {
        self.word.len()
    }

    pub fn as_str(&self) -> &str {
        &self.word
    }

    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// `(-1)^{|i & z|} i^{#Y}`: the phase picked up by basis state `i`.
    fn phase(&self, i: usize) -> Complex64 {
        let sign = if (i & self.z_mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let base = match self.y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        base * sign
    }

    /// `P|psi>`
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check(state)?;
        let src = state.amplitudes();
        let mut out = state.clone();
        let dst = out.amplitudes_mut();
        for (i, a) in src.iter().enumerate() {
            dst[i ^ self.x_mask] = self.phase(i) * a;
        }
        Ok(out)
    }

    /// `<psi|P|psi>` (complex; the imaginary part is round-off only).
    pub fn expectation_complex(&self, state: &StateVector) -> Result<Complex64> {
        self.check(state)?;
        let a = state.amplitudes();
        Ok(a.iter()
            .enumerate()
            .map(|(i, ai)| a[i ^ self.x_mask].conj() * self.phase(i) * ai)
            .sum())
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if self.num_qubits() != state.num_qubits() {
            return Err(Error::Size(format!(
                "Pauli word '{}' on {}-qubit state",
                self.word,
                state.num_qubits()
            )));
        }
        Ok(())
    }

    /// Dense matrix element `<row|P|col>`.
    pub fn matrix_element(&self, row: usize, col: usize) -> Complex64 {
        if row == col ^ self.x_mask {
            self.phase(col)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.word)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let word = String::deserialize(d)?;
        PauliString::parse(&word).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    pub pauli: PauliString,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawObservable")]
pub struct PauliSumObservable {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

#[derive(Deserialize)]
struct RawObservable {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl TryFrom<RawObservable> for PauliSumObservable {
    type Error = Error;

    fn try_from(raw: RawObservable) -> Result<Self> {
        Self::new(raw.num_qubits, raw.terms)
    }
}

impl PauliSumObservable {
    pub fn new(num_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::Size("observable needs at least one qubit".into()));
        }
        for t in &terms {
            if !t.coeff.is_finite() {
                return Err(Error::Numeric(format!("non-finite coefficient on '{}'", t.pauli)));
            }
            if t.pauli.num_qubits() != num_qubits {
                return Err(Error::Size(format!(
                    "Pauli word '{}' has length {}, expected {num_qubits}",
                    t.pauli,
                    t.pauli.num_qubits()
                )));
            }
        }
        Ok(Self { num_qubits, terms })
    }

    /// Convenience constructor from `(coeff, word)` pairs.
    pub fn from_words(num_qubits: usize, words: &[(f64, &str)]) -> Result<Self> {
        let terms = words
            .iter()
            .map(|&(coeff, w)| Ok(PauliTerm { coeff, pauli: PauliString::parse(w)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_qubits, terms)
    }

    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, Vec::new())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// `sum_k coeff_k <psi|P_k|psi>`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Size(format!(
                "observable on {} qubits, state on {}",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let mut total = Complex64::new(0.0, 0.0);
        let mut scale = 1.0f64;
        for t in &self.terms {
            total += t.pauli.expectation_complex(state)? * t.coeff;
            scale += t.coeff.abs();
        }
        if total.im.abs() > 1e-10 * scale {
            return Err(Error::Numeric(format!(
                "expectation has imaginary residue {:e}",
                total.im
            )));
        }
        Ok(total.re)
    }

    /// Dense `2^n x 2^n` matrix, row-major.
    pub fn dense_matrix(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << self.num_qubits;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for t in &self.terms {
            for col in 0..dim {
                let row = col ^ t.pauli.x_mask;
                m[row][col] += t.pauli.matrix_element(row, col) * t.coeff;
            }
        }
        m
    }
}

/// `expectation`: free-function form of [`PauliSumObservable::expectation`].
pub fn expectation(state: &StateVector, obs: &PauliSumObservable) -> Result<f64> {
    obs.expectation(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{init_state, InitKind};

    #[test]
    fn single_qubit_eigenstates() {
        let z = PauliSumObservable::from_words(1, &[(1.0, "Z")]).unwrap();
        let x = PauliSumObservable::from_words(1, &[(1.0, "X")]).unwrap();
        let zero = init_state(1, InitKind::Zeros).unwrap();
        let plus = init_state(1, InitKind::Plus).unwrap();
        assert!((z.expectation(&zero).unwrap() - 1.0).abs() < 1e-15);
        assert!((x.expectation(&plus).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_edge_cut_on_01() {
        // -(1/2)(I - Z0 Z1) on |01>: the edge is cut, so -1.
        let h = PauliSumObservable::from_words(2, &[(-0.5, "II"), (0.5, "ZZ")]).unwrap();
        let s = StateVector::from_bitstring("01").unwrap();
        assert!((h.expectation(&s).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn y_phase_convention() {
        // Y|0> = i|1>
        let y = PauliString::parse("Y").unwrap();
        let out = y.apply(&init_state(1, InitKind::Zeros).unwrap()).unwrap();
        assert!((out.amplitudes()[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // <+i|Y|+i> = 1
        let mut s = init_state(1, InitKind::Zeros).unwrap();
        s.apply(&crate::GateOp::h(0)).unwrap();
        s.apply(&crate::GateOp::rz(0, std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((y.expectation_complex(&s).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(matches!(
            PauliSumObservable::from_words(2, &[(1.0, "ZZZ")]),
            Err(Error::Size(_))
        ));
        let obs = PauliSumObservable::from_words(2, &[(1.0, "ZZ")]).unwrap();
        let s = init_state(3, InitKind::Zeros).unwrap();
        assert!(matches!(obs.expectation(&s), Err(Error::Size(_))));
        assert!(PauliString::parse("XQ").is_err());
    }

    #[test]
    fn json_format_round_trip() {
        let text = r#"{"num_qubits": 2, "terms": [{"coeff": 0.5, "pauli": "XZ"}, {"coeff": -1.0, "pauli": "II"}]}"#;
        let obs = PauliSumObservable::from_json_str(text).unwrap();
        assert_eq!(obs.terms().len(), 2);
        assert_eq!(obs.terms()[0].pauli.as_str(), "XZ");
        let again = PauliSumObservable::from_json_str(&obs.to_json().unwrap()).unwrap();
        assert_eq!(obs, again);
        assert!(PauliSumObservable::from_json_str(r#"{"num_qubits": 2, "terms": [{"coeff": 1.0, "pauli": "X"}]}"#).is_err());
    }

    #[test]
    fn dense_matrix_matches_expectation() {
        let obs = PauliSumObservable::from_words(2, &[(0.3, "XY"), (-0.7, "ZI"), (0.2, "YY")]).unwrap();
        let mut s = init_state(2, InitKind::Plus).unwrap();
        s.apply(&crate::GateOp::rot(0, 0.4, 1.1, -0.3)).unwrap();
        s.apply(&crate::GateOp::cnot(0, 1)).unwrap();
        let m = obs.dense_matrix();
        let a = s.amplitudes();
        let mut dense = Complex64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                dense += a[r].conj() * m[r][c] * a[c];
            }
        }
        assert!((dense.re - obs.expectation(&s).unwrap()).abs() < 1e-12);
        assert!(dense.im.abs() < 1e-12);
    }
}
