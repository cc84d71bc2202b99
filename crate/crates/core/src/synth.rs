//! Circuit synthesis by preorder traversal of the Hamming tree.
//!
//! The register starts in `|0^(n−k) 1^k⟩ ⊗ |0^m⟩`, the root's string. Each
//! internal node at level `i` rotates `q_{n−i}` (the last undetermined
//! position, always 1 in the node's string) into `p0|0⟩ + p1|1⟩`; on the
//! `|0⟩` branch a (C)CX moves the displaced one to `q_{n−i−ℓ}`, which turns
//! the node's string into the left child's string. The `|1⟩` branch already
//! is the right child's string.
//!
//! Nodes below the root are addressed through a control qubit that is 1
//! exactly on the basis state holding the node's string: `q_n` at level 1
//! (with `q_n` inverted around the left subtree), and ancilla `a_{n−i+1}`
//! at level `i ≥ 2`. Entering a child at level `i+1` computes
//! `a_{n−i} = c ∧ [q_{n−i} matches]` with one Toffoli, and leaving it
//! uncomputes that Toffoli, so every ancilla returns to `|0⟩`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::circuit::{u3_matrix, Circuit, Gate, QubitLayout};
use crate::error::Result;
use crate::state::{binomial, BitString, HwkStateSpec};
use crate::tree::{HammingTree, NodeCounts, NodeId};

/// Per-node subtree weight: `|α|²` at a leaf, sum of the children otherwise.
///
/// A node's subtree weight equals `Σ |α_x|²` over all weight-`k` strings
/// ending in the node's suffix.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable(Vec<f64>);

impl WeightTable {
    pub fn get(&self, id: NodeId) -> f64 {
        self.0[id.index()]
    }
}

/// One post-order pass over the preorder arena (children always have larger ids).
pub fn subtree_weights(tree: &HammingTree, spec: &HwkStateSpec) -> WeightTable {
    assert_eq!((tree.n(), tree.k()), (spec.n(), spec.k()), "tree and spec disagree on (n, k)");
    let mut weights = vec![0.0; tree.len()];
    for id in tree.preorder().rev() {
        let node = tree.node(id);
        weights[id.index()] = match (node.left(), node.right()) {
            (Some(l), Some(r)) => weights[l.index()] + weights[r.index()],
            _ => spec.amplitude(&tree.full_string(id)).norm_sqr(),
        };
    }
    WeightTable(weights)
}

/// Branch amplitudes of an internal node and the U3 angles realising them.
///
/// The angles satisfy `U3(θ,φ,λ)|1⟩ = (p0|0⟩ + p1|1⟩) / norm`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchParams {
    pub p0: Complex64,
    pub p1: Complex64,
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
    pub norm: f64,
}

impl BranchParams {
    /// Second column of U3 is `(−e^{iλ} sin(θ/2), e^{i(φ+λ)} cos(θ/2))`, so
    /// `θ = 2 arccos(|p1|/N)`, `λ = arg p0 + π`, `φ = arg p1 − arg p0 − π`.
    /// A zero norm gives the identity; `arg 0` is taken as 0.
    ///
    /// θ is evaluated as `2 atan2(|p0|, |p1|)`: arccos near 1 turns a one-ulp
    /// error in the ratio into a ~1e-8 error in the angle.
    pub fn from_amplitudes(p0: Complex64, p1: Complex64) -> Self {
        let norm = (p0.norm_sqr() + p1.norm_sqr()).sqrt();
        if norm == 0.0 {
            return BranchParams { p0, p1, theta: 0.0, phi: 0.0, lambda: 0.0, norm };
        }
        let arg = |z: Complex64| if z == Complex64::default() { 0.0 } else { z.arg() };
        let theta = 2.0 * p0.norm().atan2(p1.norm());
        let lambda = arg(p0) + PI;
        let phi = arg(p1) - arg(p0) - PI;
        BranchParams { p0, p1, theta, phi, lambda, norm }
    }

    /// `U3(θ,φ,λ)|1⟩`.
    pub fn rotated_one(&self) -> [Complex64; 2] {
        let m = u3_matrix(self.theta, self.phi, self.lambda);
        [m[0][1], m[1][1]]
    }
}

/// `p0` from the left child and `p1` from the right: the square root of the
/// subtree weight for an internal child, the amplitude itself for a leaf.
pub fn branch_params(
    tree: &HammingTree,
    node: NodeId,
    weights: &WeightTable,
    spec: &HwkStateSpec,
) -> BranchParams {
    let n = tree.node(node);
    let (left, right) = n.left().zip(n.right()).expect("branch_params needs an internal node");
    let amp = |child: NodeId| {
        if tree.node(child).is_leaf() {
            spec.amplitude(&tree.full_string(child))
        } else {
            Complex64::new(weights.get(child).sqrt(), 0.0)
        }
    };
    BranchParams::from_amplitudes(amp(left), amp(right))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthOptions {
    /// Skip zero-weight subtrees, and the split gates of a node whose left
    /// branch has zero weight. Off by default.
    pub prune_zero: bool,
}

/// Recorded on entry to each visited internal node, before its rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeVisit {
    pub node: NodeId,
    /// Number of gates emitted before this node's first gate.
    pub gate_offset: usize,
    pub level: u32,
    pub ones: u32,
    pub suffix: BitString,
    pub full_string: BitString,
    /// Flat index of the qubit selecting this node; `None` at the root.
    pub control: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub tree_counts: NodeCounts,
    pub visits: Vec<NodeVisit>,
    /// Gates spent on the global phase of a single-string spec; zero
    /// whenever `C(n,k) > 1`.
    pub phase_gates: usize,
}

pub fn synthesize(spec: &HwkStateSpec) -> Result<Circuit> {
    Ok(synthesize_with(spec, SynthOptions::default())?.circuit)
}

pub fn synthesize_with(spec: &HwkStateSpec, options: SynthOptions) -> Result<Synthesis> {
    let tree = HammingTree::build(spec.n(), spec.k())?;
    let weights = subtree_weights(&tree, spec);
    let n = spec.n() as usize;
    let k = spec.k() as usize;
    let layout = QubitLayout::for_register(n);
    let mut emitter = Emitter {
        tree: &tree,
        spec,
        weights: &weights,
        layout,
        options,
        gates: Vec::new(),
        visits: Vec::new(),
    };
    for i in n - k + 1..=n {
        emitter.x(layout.q(i));
    }
    let mut phase_gates = 0;
    if tree.node(tree.root()).is_leaf() {
        phase_gates = emitter.fix_single_string_phase();
    } else {
        emitter.visit(tree.root());
    }
    let Emitter { gates, visits, .. } = emitter;
    Ok(Synthesis {
        circuit: Circuit::from_gates(layout, gates)?,
        tree_counts: tree.count_nodes(),
        visits,
        phase_gates,
    })
}

struct Emitter<'a> {
    tree: &'a HammingTree,
    spec: &'a HwkStateSpec,
    weights: &'a WeightTable,
    layout: QubitLayout,
    options: SynthOptions,
    gates: Vec<Gate>,
    visits: Vec<NodeVisit>,
}

impl Emitter<'_> {
    fn x(&mut self, target: usize) {
        self.gates.push(Gate::X { target });
    }

    fn ccx(&mut self, c1: usize, c2: usize, target: usize) {
        self.gates.push(Gate::Ccx { controls: [c1, c2], target });
    }

    /// With a single admissible string there is no rotation to carry the
    /// phase of `α`, so a nonzero `arg α` is applied directly: `U3(0, arg α, 0)`
    /// on `q_n`, wrapped in X gates when `q_n` is 0. Returns the gate count.
    fn fix_single_string_phase(&mut self) -> usize {
        let alpha = self.spec.amplitude(&self.tree.full_string(self.tree.root()));
        let phase = alpha.arg();
        if phase == 0.0 {
            return 0;
        }
        let last = self.layout.q(self.tree.n() as usize);
        let rotate = Gate::U3 { target: last, theta: 0.0, phi: phase, lambda: 0.0 };
        if self.tree.k() == 0 {
            self.x(last);
            self.gates.push(rotate);
            self.x(last);
            3
        } else {
            self.gates.push(rotate);
            1
        }
    }

    fn descends(&self, child: NodeId) -> bool {
        !self.tree.node(child).is_leaf()
            && !(self.options.prune_zero && self.weights.get(child) == 0.0)
    }

    fn visit(&mut self, id: NodeId) {
        let node = *self.tree.node(id);
        let (left, right) = node.left().zip(node.right()).expect("visit is only called on internal nodes");
        let n = self.tree.n() as usize;
        let level = node.level() as usize;
        let ones = node.ones() as usize;
        let layout = self.layout;
        let q = |i: usize| layout.q(i);
        let control = match level {
            0 => None,
            1 => Some(q(n)),
            _ => Some(layout.a(n - level + 1)),
        };
        self.visits.push(NodeVisit {
            node: id,
            gate_offset: self.gates.len(),
            level: node.level(),
            ones: node.ones(),
            suffix: node.suffix(),
            full_string: self.tree.full_string(id),
            control,
        });

        let params = branch_params(self.tree, id, self.weights, self.spec);
        let (theta, phi, lambda) = (params.theta, params.phi, params.lambda);
        let pivot = q(n - level);
        let landing = q(n - level - ones);
        let split = !(self.options.prune_zero && params.p0 == Complex64::default());

        match control {
            None => {
                self.gates.push(Gate::U3 { target: pivot, theta, phi, lambda });
                if split {
                    self.x(pivot);
                    self.gates.push(Gate::Cnot { control: pivot, target: landing });
                    self.x(pivot);
                }
                if self.descends(left) {
                    self.x(pivot);
                    self.visit(left);
                    self.x(pivot);
                }
                if self.descends(right) {
                    self.visit(right);
                }
            }
            Some(c) => {
                self.gates.push(Gate::Cu3 { control: c, target: pivot, theta, phi, lambda });
                if split {
                    self.x(pivot);
                    self.ccx(c, pivot, landing);
                    self.x(pivot);
                }
                if self.descends(left) {
                    let flag = layout.a(n - level);
                    self.x(pivot);
                    self.ccx(c, pivot, flag);
                    self.visit(left);
                    self.ccx(c, pivot, flag);
                    self.x(pivot);
                }
                if self.descends(right) {
                    let flag = layout.a(n - level);
                    self.ccx(c, pivot, flag);
                    self.visit(right);
                    self.ccx(c, pivot, flag);
                }
            }
        }
    }
}

/// Gate total against the per-node accounting bound `10·(C(n,k) − 1) + k`.
///
/// A node costs at most 4 gates for its own split, 4 more to enter an
/// internal left child and 2 to enter an internal right child. Phase gates
/// of a single-string spec are reported separately and not held to the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateCountCertificate {
    pub internal_nodes: u64,
    pub total_gates: u64,
    pub phase_gates: u64,
    pub bound: u64,
    pub ok: bool,
}

pub fn gate_count_certificate(spec: &HwkStateSpec) -> Result<GateCountCertificate> {
    let synthesis = synthesize_with(spec, SynthOptions::default())?;
    let leaves = binomial(spec.n(), spec.k());
    let bound = 10 * (leaves - 1) + u64::from(spec.k());
    let total_gates = synthesis.circuit.total_gates() as u64;
    let phase_gates = synthesis.phase_gates as u64;
    Ok(GateCountCertificate {
        internal_nodes: synthesis.tree_counts.internal,
        total_gates,
        phase_gates,
        bound,
        ok: total_gates - phase_gates <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{compare_to_spec, StateVector};
    use crate::state::{dicke, random_hwk, suffix_weight};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn weights_match_reference_sums() {
        for (n, k, seed) in [(4, 2, 1), (6, 3, 2), (7, 2, 3), (5, 5, 4), (8, 4, 5)] {
            let spec = random_hwk(n, k, seed).unwrap();
            let tree = HammingTree::build(n, k).unwrap();
            let weights = subtree_weights(&tree, &spec);
            assert!((weights.get(tree.root()) - 1.0).abs() < 1e-9);
            for id in tree.preorder() {
                let reference = suffix_weight(&spec, &tree.node(id).suffix());
                assert!((weights.get(id) - reference).abs() <= 1e-12);
                assert!(weights.get(id) >= 0.0);
            }
        }
    }

    #[test]
    fn dicke_weights() {
        let tree = HammingTree::build(4, 2).unwrap();
        let weights = subtree_weights(&tree, &dicke(4, 2).unwrap());
        let right = tree.node(tree.root()).right().unwrap();
        assert!((weights.get(tree.root()) - 1.0).abs() < 1e-12);
        assert!((weights.get(right) - 0.5).abs() < 1e-12);

        let tree = HammingTree::build(2, 1).unwrap();
        let weights = subtree_weights(&tree, &dicke(2, 1).unwrap());
        for leaf in tree.preorder().skip(1) {
            assert!((weights.get(leaf) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn single_support_weights() {
        let spec = HwkStateSpec::from_amplitudes(4, 2, [("0011".parse().unwrap(), c(1.0, 0.0))]).unwrap();
        let tree = HammingTree::build(4, 2).unwrap();
        let weights = subtree_weights(&tree, &spec);
        for id in tree.preorder().filter(|&id| tree.node(id).is_leaf()) {
            let expected = if tree.full_string(id).to_string() == "0011" { 1.0 } else { 0.0 };
            assert_eq!(weights.get(id), expected);
        }
    }

    #[test]
    fn branch_params_real_split() {
        let p = BranchParams::from_amplitudes(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0));
        assert!((p.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let [a0, a1] = p.rotated_one();
        assert!(close(a0, c(FRAC_1_SQRT_2, 0.0), 1e-12));
        assert!(close(a1, c(FRAC_1_SQRT_2, 0.0), 1e-12));
    }

    #[test]
    fn branch_params_no_split() {
        let p = BranchParams::from_amplitudes(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(p.theta, 0.0);
        let [a0, a1] = p.rotated_one();
        assert!(close(a0, c(0.0, 0.0), 1e-15));
        assert!(close(a1, c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn branch_params_complex_phase() {
        let p = BranchParams::from_amplitudes(c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0));
        let [a0, a1] = p.rotated_one();
        assert!(close(a0, c(0.0, FRAC_1_SQRT_2), 1e-12));
        assert!(close(a1, c(FRAC_1_SQRT_2, 0.0), 1e-12));
    }

    #[test]
    fn branch_params_dead_branch() {
        let p = BranchParams::from_amplitudes(c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!((p.theta, p.phi, p.lambda, p.norm), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn literal_printed_angles_fail_the_contract() {
        // φ = arg p0 − π, λ = arg p1 − φ does not reproduce complex branches.
        let (p0, p1) = (c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0));
        let theta = 2.0 * (p1.norm()).acos();
        let phi = p0.arg() - PI;
        let lambda = p1.arg() - phi;
        let m = u3_matrix(theta, phi, lambda);
        assert!(!close(m[0][1], p0, 1e-3) || !close(m[1][1], p1, 1e-3));
    }

    #[test]
    fn two_one_trace() {
        let spec = dicke(2, 1).unwrap();
        let circuit = synthesize(&spec).unwrap();
        let kinds: Vec<_> = circuit.gates().iter().map(|g| g.kind().qasm_name()).collect();
        assert_eq!(kinds, ["x", "u3", "x", "cx", "x"]);
        assert_eq!(circuit.gates()[0], Gate::X { target: 1 });
        assert_eq!(circuit.gates()[3], Gate::Cnot { control: 1, target: 0 });
        let state = StateVector::run(&circuit).unwrap();
        assert!(close(state.amplitude(0b01), c(FRAC_1_SQRT_2, 0.0), 1e-12));
        assert!(close(state.amplitude(0b10), c(FRAC_1_SQRT_2, 0.0), 1e-12));
    }

    #[test]
    fn three_one_gate_count() {
        let spec = random_hwk(3, 1, 42).unwrap();
        let circuit = synthesize(&spec).unwrap();
        assert_eq!(circuit.total_gates(), 11);
        assert_eq!(circuit.num_qubits(), 3);
        let report = compare_to_spec(&StateVector::run(&circuit).unwrap(), &spec).unwrap();
        assert!(report.max_amp_error <= 1e-10);
    }

    #[test]
    fn single_leaf_specs_only_initialize() {
        for (n, k) in [(1, 0), (1, 1), (3, 0), (3, 3), (5, 5), (6, 0)] {
            let circuit = synthesize(&dicke(n, k).unwrap()).unwrap();
            assert_eq!(circuit.total_gates(), k as usize);
            assert!(circuit.gates().iter().all(|g| matches!(g, Gate::X { .. })));
        }
    }

    #[test]
    fn single_string_phase_is_reproduced() {
        for (n, k) in [(1, 0), (1, 1), (4, 0), (4, 4)] {
            let spec = random_hwk(n, k, 5).unwrap();
            let circuit = synthesize(&spec).unwrap();
            assert_eq!(circuit.total_gates(), k as usize + if k == 0 { 3 } else { 1 });
            let report = compare_to_spec(&StateVector::run(&circuit).unwrap(), &spec).unwrap();
            assert!(report.max_amp_error <= 1e-15, "n={n} k={k}: {report:?}");
        }
    }

    #[test]
    fn near_degenerate_split_is_accurate() {
        // |α| and √|α|² can differ by an ulp; the split angle must still be exactly 0.
        let alpha = c(0.3, -0.4) / c(0.3, -0.4).norm();
        let p = BranchParams::from_amplitudes(c(0.0, 0.0), alpha);
        assert_eq!(p.theta, 0.0);
        let [a0, a1] = p.rotated_one();
        assert_eq!(a0.norm(), 0.0);
        assert!(close(a1, alpha, 1e-15));
    }

    #[test]
    fn certificate_examples() {
        let cert = gate_count_certificate(&dicke(2, 1).unwrap()).unwrap();
        assert_eq!((cert.total_gates, cert.bound, cert.ok), (5, 11, true));
        let cert = gate_count_certificate(&dicke(4, 2).unwrap()).unwrap();
        assert_eq!(cert.internal_nodes, 5);
        assert_eq!(cert.bound, 52);
        assert!(cert.ok && cert.total_gates <= 52);
        let cert = gate_count_certificate(&dicke(5, 0).unwrap()).unwrap();
        assert_eq!((cert.total_gates, cert.bound, cert.ok), (0, 0, true));
        let phased = HwkStateSpec::from_amplitudes(3, 3, [("111".parse().unwrap(), c(0.0, 1.0))]).unwrap();
        let cert = gate_count_certificate(&phased).unwrap();
        assert_eq!((cert.total_gates, cert.phase_gates, cert.bound, cert.ok), (4, 1, 3, true));
    }

    #[test]
    fn four_two_prepares_exactly() {
        let spec = random_hwk(4, 2, 9).unwrap();
        let circuit = synthesize(&spec).unwrap();
        let report = compare_to_spec(&StateVector::run(&circuit).unwrap(), &spec).unwrap();
        assert!(report.max_amp_error <= 1e-10, "{report:?}");
        assert!(report.ancilla_residual <= 1e-12);
    }
}
