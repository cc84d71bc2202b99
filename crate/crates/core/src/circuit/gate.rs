use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn x_matrix() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

/// `[[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [Complex64::from_polar(s, phi), Complex64::from_polar(c, phi + lambda)],
    ]
}

pub fn ry_matrix(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// Phase-gate convention: `diag(1, e^{iθ})`, not the half-angle `diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn rz_matrix(theta: f64) -> Mat2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Gate kinds, used for histograms and gate-set checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Cnot,
    Ccx,
    U3,
    Cu3,
    Ry,
    Rz,
    Cry,
    Crz,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::Cnot,
        GateKind::Ccx,
        GateKind::U3,
        GateKind::Cu3,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cry,
        GateKind::Crz,
    ];

    /// Kinds the synthesizer emits.
    pub const SYNTHESIS_SET: [GateKind; 5] =
        [GateKind::X, GateKind::Cnot, GateKind::Ccx, GateKind::U3, GateKind::Cu3];

    /// Kinds left after U3/CU3 are split into Y and Z rotations.
    pub const ROTATION_SET: [GateKind; 7] = [
        GateKind::X,
        GateKind::Cnot,
        GateKind::Ccx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cry,
        GateKind::Crz,
    ];

    /// OpenQASM 2.0 mnemonic. `Crz` maps to `cu1`, the controlled phase gate,
    /// since `crz` in qelib1 uses the half-angle convention.
    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Ccx => "ccx",
            GateKind::U3 => "u3",
            GateKind::Cu3 => "cu3",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cry => "cry",
            GateKind::Crz => "cu1",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.qasm_name())
    }
}

/// A gate on flat qubit indices. Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    X { target: usize },
    Cnot { control: usize, target: usize },
    Ccx { controls: [usize; 2], target: usize },
    U3 { target: usize, theta: f64, phi: f64, lambda: f64 },
    Cu3 { control: usize, target: usize, theta: f64, phi: f64, lambda: f64 },
    Ry { target: usize, theta: f64 },
    Rz { target: usize, theta: f64 },
    Cry { control: usize, target: usize, theta: f64 },
    Crz { control: usize, target: usize, theta: f64 },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X { .. } => GateKind::X,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Ccx { .. } => GateKind::Ccx,
            Gate::U3 { .. } => GateKind::U3,
            Gate::Cu3 { .. } => GateKind::Cu3,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::Cry { .. } => GateKind::Cry,
            Gate::Crz { .. } => GateKind::Crz,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::X { target }
            | Gate::Cnot { target, .. }
            | Gate::Ccx { target, .. }
            | Gate::U3 { target, .. }
            | Gate::Cu3 { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. }
            | Gate::Cry { target, .. }
            | Gate::Crz { target, .. } => target,
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            Gate::X { .. } | Gate::U3 { .. } | Gate::Ry { .. } | Gate::Rz { .. } => &[],
            Gate::Ccx { controls, .. } => controls,
            Gate::Cnot { control, .. }
            | Gate::Cu3 { control, .. }
            | Gate::Cry { control, .. }
            | Gate::Crz { control, .. } => std::slice::from_ref(control),
        }
    }

    /// Controls followed by the target.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls().iter().copied().chain(std::iter::once(self.target()))
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.qubits().any(|q| q == qubit)
    }

    /// True for X, CNOT and CCX, which only permute basis states.
    pub fn is_permutation(&self) -> bool {
        matches!(self, Gate::X { .. } | Gate::Cnot { .. } | Gate::Ccx { .. })
    }

    /// Angle parameters in QASM argument order.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::X { .. } | Gate::Cnot { .. } | Gate::Ccx { .. } => vec![],
            Gate::U3 { theta, phi, lambda, .. } | Gate::Cu3 { theta, phi, lambda, .. } => {
                vec![theta, phi, lambda]
            }
            Gate::Ry { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::Cry { theta, .. }
            | Gate::Crz { theta, .. } => vec![theta],
        }
    }

    /// The 2×2 matrix applied to the target when every control is 1.
    pub fn target_matrix(&self) -> Mat2 {
        match *self {
            Gate::X { .. } | Gate::Cnot { .. } | Gate::Ccx { .. } => x_matrix(),
            Gate::U3 { theta, phi, lambda, .. } | Gate::Cu3 { theta, phi, lambda, .. } => {
                u3_matrix(theta, phi, lambda)
            }
            Gate::Ry { theta, .. } | Gate::Cry { theta, .. } => ry_matrix(theta),
            Gate::Rz { theta, .. } | Gate::Crz { theta, .. } => rz_matrix(theta),
        }
    }
}

/// A gate's action as a target-local matrix; identity on every basis state
/// where some control is 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    pub controls: Vec<usize>,
    pub target: usize,
    pub matrix: Mat2,
}

pub fn gate_matrix(gate: &Gate) -> GateMatrix {
    GateMatrix {
        controls: gate.controls().to_vec(),
        target: gate.target(),
        matrix: gate.target_matrix(),
    }
}
