use super::gate::{ry_matrix, rz_matrix, Mat2};
use super::{Circuit, Gate};

/// A single-axis rotation factor of a U3 gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation {
    Ry(f64),
    Rz(f64),
}

impl Rotation {
    pub fn matrix(self) -> Mat2 {
        match self {
            Rotation::Ry(theta) => ry_matrix(theta),
            Rotation::Rz(theta) => rz_matrix(theta),
        }
    }

    fn on(self, target: usize) -> Gate {
        match self {
            Rotation::Ry(theta) => Gate::Ry { target, theta },
            Rotation::Rz(theta) => Gate::Rz { target, theta },
        }
    }

    fn controlled(self, control: usize, target: usize) -> Gate {
        match self {
            Rotation::Ry(theta) => Gate::Cry { control, target, theta },
            Rotation::Rz(theta) => Gate::Crz { control, target, theta },
        }
    }
}

/// `U3(θ,φ,λ) = Rz(φ)·Ry(θ)·Rz(λ)`, returned in application order
/// `[Rz(λ), Ry(θ), Rz(φ)]`. Exact under the phase-gate `Rz` convention.
pub fn decompose_u3(theta: f64, phi: f64, lambda: f64) -> [Rotation; 3] {
    [Rotation::Rz(lambda), Rotation::Ry(theta), Rotation::Rz(phi)]
}

/// Rewrites every U3 and CU3 into Y/Z rotations (controlled ones keep the
/// control on each factor). Other gates pass through unchanged.
pub fn decompose_circuit(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.total_gates());
    for gate in circuit.gates() {
        match *gate {
            Gate::U3 { target, theta, phi, lambda } => {
                gates.extend(decompose_u3(theta, phi, lambda).map(|r| r.on(target)));
            }
            Gate::Cu3 { control, target, theta, phi, lambda } => {
                gates.extend(decompose_u3(theta, phi, lambda).map(|r| r.controlled(control, target)));
            }
            other => gates.push(other),
        }
    }
    Circuit { layout: circuit.layout, gates }
}
