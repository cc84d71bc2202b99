use serde::{Deserialize, Serialize};

/// Flat qubit numbering for a synthesis register.
///
/// Working qubits `q_1 … q_n` take indices `0 … n−1`. Ancillas are named
/// `a_3 … a_{n−1}` and placed after the working register in reverse, so
/// `a_j ↦ n + (n − 1 − j)`: `a_{n−1}` is index `n`, `a_3` is the last index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitLayout {
    pub working: usize,
    pub ancillas: usize,
}

impl QubitLayout {
    /// The standard layout for `n` working qubits: `max(0, n − 3)` ancillas.
    pub fn for_register(n: usize) -> Self {
        QubitLayout {
            working: n,
            ancillas: n.saturating_sub(3),
        }
    }

    /// A layout with an arbitrary ancilla count, for circuits that did not
    /// come from the synthesizer.
    pub fn custom(working: usize, ancillas: usize) -> Self {
        QubitLayout { working, ancillas }
    }

    pub fn total(&self) -> usize {
        self.working + self.ancillas
    }

    /// Flat index of working qubit `q_i`, 1-based.
    pub fn q(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.working, "q_{i} outside q_1..=q_{}", self.working);
        i - 1
    }

    /// Flat index of ancilla `a_j`, `3 ≤ j ≤ n − 1`.
    pub fn a(&self, j: usize) -> usize {
        let n = self.working;
        assert!(
            j >= 3 && j < n && n - 1 - j < self.ancillas,
            "a_{j} is not part of this layout"
        );
        n + (n - 1 - j)
    }

    pub fn is_ancilla(&self, index: usize) -> bool {
        index >= self.working && index < self.total()
    }

    /// Human-readable name of a flat index, e.g. `q3` or `a5`.
    pub fn label(&self, index: usize) -> String {
        if index < self.working {
            format!("q{}", index + 1)
        } else {
            format!("a{}", 2 * self.working - 1 - index)
        }
    }
}
