use super::{Circuit, Gate};

/// Removes pairs of X gates on the same wire that have no other gate
/// touching that wire between them.
///
/// A single sweep reaches the fixed point: when a pair cancels, the wire
/// falls back to "no pending X", which is exactly the state it was in
/// before the first gate of the pair.
pub fn peephole_cancel_x(circuit: &Circuit) -> Circuit {
    let gates = circuit.gates();
    let mut keep = vec![true; gates.len()];
    let mut pending: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
    for (idx, gate) in gates.iter().enumerate() {
        match *gate {
            Gate::X { target } => match pending[target].take() {
                Some(prev) => {
                    keep[prev] = false;
                    keep[idx] = false;
                }
                None => pending[target] = Some(idx),
            },
            _ => {
                for q in gate.qubits() {
                    pending[q] = None;
                }
            }
        }
    }
    let gates = gates
        .iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(*g))
        .collect();
    Circuit { layout: circuit.layout, gates }
}
