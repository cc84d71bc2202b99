//! Synthesis of quantum circuits that prepare fixed-Hamming-weight states.
//!
//! Given amplitudes `α_x` over the `C(n,k)` bitstrings of length `n` and
//! weight `k`, [`synth::synthesize`] emits a circuit over X, CNOT, CCX, U3
//! and controlled-U3 that maps `|0^(n+m)⟩` to `Σ α_x |x⟩ ⊗ |0^m⟩` using
//! `m = max(0, n−3)` ancillas and `O(C(n,k))` gates. The [`sim`] module is a
//! dense statevector oracle used to check every emitted circuit.
//!
//! Conventions used throughout:
//!
//! * bitstrings are written `x_1 x_2 … x_n`, and `x_1` sits on flat qubit 0;
//! * flat qubit 0 is the most significant bit of a basis index;
//! * `Rz(θ) = diag(1, e^{iθ})`, so `U3(θ,φ,λ) = Rz(φ)·Ry(θ)·Rz(λ)` holds
//!   exactly, with no global phase.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod sim;
pub mod state;
pub mod synth;
pub mod tree;

pub use circuit::{Circuit, Gate, GateKind, QubitLayout};
pub use error::{Error, Result};
pub use sim::{compare_to_spec, StateVector, VerificationReport};
pub use state::{dicke, random_hwk, random_hwk_sparse, BitString, HwkStateSpec};
pub use synth::{synthesize, synthesize_with, SynthOptions};
pub use tree::HammingTree;
