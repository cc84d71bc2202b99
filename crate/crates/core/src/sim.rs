//! Dense statevector simulation, used as the verification oracle.
//!
//! Flat qubit 0 is the most significant bit of a basis index, so the basis
//! state `|x_1 x_2 … x_n a…⟩` sits at the index spelled by that string.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Gate, QubitLayout};
use crate::error::{Error, Result};
use crate::state::{BitString, HwkStateSpec};

/// 2^26 amplitudes of 16 bytes each is 1 GiB.
pub const MAX_QUBITS: usize = 26;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { qubits, max: MAX_QUBITS });
        }
        let mut amplitudes = vec![Complex64::default(); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubits, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::InvalidGate(format!("{len} amplitudes is not a qubit register")));
        }
        let qubits = len.trailing_zeros() as usize;
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { qubits, max: MAX_QUBITS });
        }
        Ok(StateVector { qubits, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.qubits - 1 - qubit)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if let Some(index) = gate.qubits().find(|&q| q >= self.qubits) {
            return Err(Error::IndexOutOfRange { index, qubits: self.qubits });
        }
        let target = self.bit(gate.target());
        let control_mask = gate.controls().iter().fold(0, |m, &c| m | self.bit(c));
        let active = |i: usize| i & target == 0 && i & control_mask == control_mask;
        if gate.is_permutation() {
            for i in 0..self.amplitudes.len() {
                if active(i) {
                    self.amplitudes.swap(i, i | target);
                }
            }
        } else {
            let m = gate.target_matrix();
            for i in 0..self.amplitudes.len() {
                if active(i) {
                    let j = i | target;
                    let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
                    self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                    self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
        Ok(())
    }

    pub fn run(circuit: &Circuit) -> Result<Self> {
        let mut state = StateVector::zero_state(circuit.num_qubits())?;
        for gate in circuit.gates() {
            state.apply_gate(gate)?;
        }
        Ok(state)
    }

    /// `(index, re, im)` for every amplitude, for debugging dumps.
    pub fn to_triples(&self) -> Vec<(usize, f64, f64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.re, a.im))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_triples())?)
    }
}

/// How closely a simulated state matches `Σ α_x |x⟩ ⊗ |0^m⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    /// `|⟨target ⊗ 0^m | state⟩|`
    pub fidelity: f64,
    /// Largest `|state_i − expected_i|` over every basis index.
    pub max_amp_error: f64,
    /// Probability on basis states with some ancilla bit set.
    pub ancilla_residual: f64,
}

impl VerificationReport {
    pub fn passes(&self, fidelity_tol: f64, amp_tol: f64, ancilla_tol: f64) -> bool {
        self.fidelity >= 1.0 - fidelity_tol
            && self.max_amp_error <= amp_tol
            && self.ancilla_residual <= ancilla_tol
    }
}

/// Compares a state on the standard layout for `spec.n()` against the spec.
pub fn compare_to_spec(state: &StateVector, spec: &HwkStateSpec) -> Result<VerificationReport> {
    let layout = QubitLayout::for_register(spec.n() as usize);
    if state.qubit_count() != layout.total() {
        return Err(Error::SizeMismatch { state: state.qubit_count(), expected: layout.total() });
    }
    let shift = layout.ancillas;
    let ancilla_mask = (1usize << shift) - 1;
    let mut overlap = Complex64::default();
    let mut max_amp_error: f64 = 0.0;
    let mut ancilla_residual = 0.0;
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let expected = if idx & ancilla_mask != 0 {
            ancilla_residual += amp.norm_sqr();
            Complex64::default()
        } else {
            let x = (idx >> shift) as u64;
            if x.count_ones() == spec.k() {
                spec.amplitude(&BitString::from_bits(x, spec.n()))
            } else {
                Complex64::default()
            }
        };
        overlap += expected.conj() * amp;
        max_amp_error = max_amp_error.max((amp - expected).norm());
    }
    Ok(VerificationReport {
        fidelity: overlap.norm(),
        max_amp_error,
        ancilla_residual,
    })
}
