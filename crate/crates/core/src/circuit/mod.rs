//! Gate-level circuit representation.

mod decompose;
mod gate;
mod layout;
mod peephole;
mod qasm;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decompose::{decompose_circuit, decompose_u3, Rotation};
pub use gate::{
    gate_matrix, identity, mat_mul, max_abs_diff, ry_matrix, rz_matrix, u3_matrix, x_matrix,
    Gate, GateKind, GateMatrix, Mat2,
};
pub use layout::QubitLayout;
pub use peephole::peephole_cancel_x;
pub use qasm::{emit_qasm, parse_qasm};

/// An ordered gate list over a [`QubitLayout`]. Gates apply first to last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRepr")]
pub struct Circuit {
    layout: QubitLayout,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct CircuitRepr {
    layout: QubitLayout,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = Error;

    fn try_from(repr: CircuitRepr) -> Result<Self> {
        Circuit::from_gates(repr.layout, repr.gates)
    }
}

impl Circuit {
    pub fn new(layout: QubitLayout) -> Self {
        Circuit { layout, gates: Vec::new() }
    }

    /// Builds a circuit after checking every gate against the layout.
    pub fn from_gates(layout: QubitLayout, gates: Vec<Gate>) -> Result<Self> {
        for gate in &gates {
            check_gate(gate, layout.total())?;
        }
        Ok(Circuit { layout, gates })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        check_gate(&gate, self.layout.total())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn layout(&self) -> QubitLayout {
        self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gates_mut(&mut self) -> &mut [Gate] {
        &mut self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn total_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn gate_counts(&self) -> BTreeMap<GateKind, usize> {
        let mut counts = BTreeMap::new();
        for gate in &self.gates {
            *counts.entry(gate.kind()).or_insert(0) += 1;
        }
        counts
    }

    /// ASAP layering: each gate starts one layer after the latest gate on any of its wires.
    pub fn depth(&self) -> usize {
        let mut wire_depth = vec![0usize; self.layout.total()];
        let mut depth = 0;
        for gate in &self.gates {
            let layer = gate.qubits().map(|q| wire_depth[q]).max().unwrap_or(0) + 1;
            for q in gate.qubits() {
                wire_depth[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Highest ancilla index addressed, as a count of ancillas in use.
    pub fn ancillas_addressed(&self) -> usize {
        self.gates
            .iter()
            .flat_map(|g| g.qubits())
            .filter(|&q| self.layout.is_ancilla(q))
            .map(|q| q - self.layout.working + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn uses_only(&self, kinds: &[GateKind]) -> bool {
        self.gates.iter().all(|g| kinds.contains(&g.kind()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_gate(gate: &Gate, qubits: usize) -> Result<()> {
    let mut seen = [usize::MAX; 3];
    for (slot, q) in gate.qubits().enumerate() {
        if q >= qubits {
            return Err(Error::IndexOutOfRange { index: q, qubits });
        }
        if seen[..slot].contains(&q) {
            return Err(Error::InvalidGate(format!("{gate:?} repeats qubit {q}")));
        }
        seen[slot] = q;
    }
    if gate.params().iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidGate(format!("{gate:?} has a non-finite angle")));
    }
    Ok(())
}
