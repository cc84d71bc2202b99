use std::time::Instant;

use hwk_prep::circuit::{
    decompose_circuit, decompose_u3, emit_qasm, identity, mat_mul, max_abs_diff, parse_qasm,
    peephole_cancel_x, u3_matrix, Circuit, Gate, GateKind, QubitLayout,
};
use hwk_prep::sim::{compare_to_spec, StateVector};
use hwk_prep::state::{binomial, dicke, random_hwk, random_hwk_sparse};
use hwk_prep::synth::{synthesize, synthesize_with, SynthOptions};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_gate(rng: &mut ChaCha8Rng, qubits: usize) -> Gate {
    let mut pick = |exclude: &[usize]| loop {
        let q = rng.gen_range(0..qubits);
        if !exclude.contains(&q) {
            break q;
        }
    };
    let t = pick(&[]);
    let c1 = pick(&[t]);
    let c2 = if qubits >= 3 { pick(&[t, c1]) } else { c1 };
    let mut angle = || rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let (a, b, c) = (angle(), angle(), angle());
    match rng.gen_range(0..if qubits >= 3 { 6 } else { 5 }) {
        // X is weighted up so cancellable pairs actually occur.
        0 | 1 => Gate::X { target: t },
        2 => Gate::Cnot { control: c1, target: t },
        3 => Gate::U3 { target: t, theta: a, phi: b, lambda: c },
        4 => Gate::Cu3 { control: c1, target: t, theta: a, phi: b, lambda: c },
        _ => Gate::Ccx { controls: [c1, c2], target: t },
    }
}

fn random_circuit(seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qubits = rng.gen_range(2..=6);
    let len = rng.gen_range(0..40);
    let gates = (0..len).map(|_| random_gate(&mut rng, qubits)).collect();
    Circuit::from_gates(QubitLayout::custom(qubits, 0), gates).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, qubits: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << qubits)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn peephole_preserves_semantics_on_random_circuits() {
    let mut removed = 0;
    for seed in 0..50 {
        let circuit = random_circuit(seed);
        let reduced = peephole_cancel_x(&circuit);
        removed += circuit.total_gates() - reduced.total_gates();
        let before = StateVector::run(&circuit).unwrap();
        let after = StateVector::run(&reduced).unwrap();
        assert!(max_diff(&before, &after) <= 1e-12, "seed {seed}");
        assert_eq!(peephole_cancel_x(&reduced), reduced, "not idempotent for seed {seed}");
    }
    assert!(removed > 0, "random circuits never exercised a cancellation");
}

#[test]
fn decomposition_identity_on_seeded_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let (t, p, l) = (
            rng.gen_range(-4.0 * std::f64::consts::PI..4.0 * std::f64::consts::PI),
            rng.gen_range(-4.0 * std::f64::consts::PI..4.0 * std::f64::consts::PI),
            rng.gen_range(-4.0 * std::f64::consts::PI..4.0 * std::f64::consts::PI),
        );
        let product = decompose_u3(t, p, l)
            .iter()
            .fold(identity(), |acc, r| mat_mul(&r.matrix(), &acc));
        assert!(max_abs_diff(&product, &u3_matrix(t, p, l)) <= 1e-12);
    }
}

#[test]
fn permutation_gates_are_involutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let state = random_state(&mut rng, 4);
        for gate in [
            Gate::X { target: 2 },
            Gate::Cnot { control: 3, target: 0 },
            Gate::Ccx { controls: [0, 3], target: 1 },
        ] {
            let mut twice = state.clone();
            twice.apply_gate(&gate).unwrap();
            twice.apply_gate(&gate).unwrap();
            assert_eq!(twice, state);
        }
    }
}

#[test]
fn u3_application_matches_matrix_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let qubits = 3;
        let state = random_state(&mut rng, qubits);
        let target = rng.gen_range(0..qubits);
        let (t, p, l) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let mut applied = state.clone();
        applied.apply_gate(&Gate::U3 { target, theta: t, phi: p, lambda: l }).unwrap();
        let m = u3_matrix(t, p, l);
        let bit = 1 << (qubits - 1 - target);
        for i in (0..1 << qubits).filter(|i| i & bit == 0) {
            let (a0, a1) = (state.amplitude(i), state.amplitude(i | bit));
            assert!((applied.amplitude(i) - (m[0][0] * a0 + m[0][1] * a1)).norm() <= 1e-13);
            assert!((applied.amplitude(i | bit) - (m[1][0] * a0 + m[1][1] * a1)).norm() <= 1e-13);
        }
    }
}

#[test]
fn norm_is_preserved_gate_by_gate() {
    let spec = random_hwk(6, 3, 12).unwrap();
    let circuit = synthesize(&spec).unwrap();
    let mut state = StateVector::zero_state(circuit.num_qubits()).unwrap();
    for gate in circuit.gates() {
        state.apply_gate(gate).unwrap();
        assert!((state.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn qasm_round_trip_of_synthesized_circuits() {
    for (n, k, seed) in [(4, 2, 1), (6, 3, 2), (7, 1, 3)] {
        let circuit = synthesize(&random_hwk(n, k, seed).unwrap()).unwrap();
        for c in [circuit.clone(), decompose_circuit(&circuit)] {
            assert_eq!(parse_qasm(&emit_qasm(&c)).unwrap(), c);
        }
    }
}

/// At entry to every node below level 1, the only basis state with the
/// selecting qubit set is the node's own string. Zero bits of the suffix are
/// X-inverted while their subtree is being visited, so the register holds
/// the string with those bits flipped.
#[test]
fn path_indicator_invariant() {
    for (n, k, seed) in [(5, 2, 1), (6, 3, 2), (7, 3, 3), (7, 4, 4), (8, 4, 5)] {
        let spec = random_hwk(n, k, seed).unwrap();
        let synthesis = synthesize_with(&spec, SynthOptions::default()).unwrap();
        let circuit = &synthesis.circuit;
        let layout = circuit.layout();
        let total = layout.total();
        let mut state = StateVector::zero_state(total).unwrap();
        let mut applied = 0;
        let mut checked = 0;
        for visit in synthesis.visits.iter().filter(|v| v.level >= 2) {
            for gate in &circuit.gates()[applied..visit.gate_offset] {
                state.apply_gate(gate).unwrap();
            }
            applied = visit.gate_offset;
            let control = visit.control.unwrap();
            assert_eq!(control, layout.a(n as usize - visit.level as usize + 1));
            let bit = 1 << (total - 1 - control);
            let mut selected = 0.0;
            let mut matching = 0.0;
            for (idx, amp) in state.amplitudes().iter().enumerate() {
                if idx & bit != 0 {
                    selected += amp.norm_sqr();
                    let working = (idx >> layout.ancillas) as u64;
                    let suffix_mask = (1u64 << visit.level) - 1;
                    let inverted = visit.full_string.bits() ^ (suffix_mask & !visit.suffix.bits());
                    if working == inverted {
                        matching += amp.norm_sqr();
                    }
                }
            }
            assert!(selected > 1e-6, "full-support spec left node {visit:?} unselected");
            assert!((selected - matching).abs() <= 1e-12, "n={n} k={k} visit {visit:?}");
            checked += 1;
        }
        assert!(checked > 0);
    }
}

#[test]
fn ancilla_addressing_range() {
    for n in 1..=12u32 {
        for k in 0..=n {
            let circuit = synthesize(&dicke(n, k).unwrap()).unwrap();
            let layout = circuit.layout();
            assert_eq!(layout.ancillas, n.saturating_sub(3) as usize);
            assert!(circuit.ancillas_addressed() <= layout.ancillas);
            assert!(circuit.uses_only(&GateKind::SYNTHESIS_SET));
        }
    }
}

#[test]
fn gate_count_linearity() {
    for n in 1..=12u32 {
        for k in 0..=n {
            let circuit = synthesize(&dicke(n, k).unwrap()).unwrap();
            let binom = binomial(n, k) as f64;
            assert!(circuit.total_gates() as f64 / binom <= 10.0 + f64::from(k) / binom);
        }
    }
}

#[test]
fn pruning_matches_unpruned_state() {
    for seed in 0..10 {
        let spec = random_hwk_sparse(6, 3, seed, 0.6).unwrap();
        let full = synthesize_with(&spec, SynthOptions::default()).unwrap().circuit;
        let pruned = synthesize_with(&spec, SynthOptions { prune_zero: true }).unwrap().circuit;
        assert!(pruned.total_gates() <= full.total_gates());
        let a = StateVector::run(&full).unwrap();
        let b = StateVector::run(&pruned).unwrap();
        assert!(max_diff(&a, &b) <= 1e-10);
        assert!(compare_to_spec(&b, &spec).unwrap().max_amp_error <= 1e-10);
    }
}

/// Synthesis time per leaf stays flat along k = ⌊n/2⌋.
#[test]
fn synthesis_time_scales_linearly() {
    let time_per_leaf = |n: u32| {
        let spec = dicke(n, n / 2).unwrap();
        let best = (0..3)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(synthesize(&spec).unwrap());
                start.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min);
        best / binomial(n, n / 2) as f64
    };
    let small = time_per_leaf(14);
    let large = time_per_leaf(16);
    // C(16,8)/C(14,7) ≈ 3.7, so a linear algorithm keeps the per-leaf time
    // roughly constant. Allow a factor of 3 for cache effects.
    assert!(large / small <= 3.0, "per-leaf time grew {:.2}x", large / small);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesized_state_is_exact(n in 1u32..=7, k_frac in 0.0f64..=1.0, seed: u64, sparsity in 0.0f64..0.9, prune: bool) {
        let k = (k_frac * f64::from(n)).round() as u32;
        let spec = random_hwk_sparse(n, k, seed, sparsity).unwrap();
        let circuit = synthesize_with(&spec, SynthOptions { prune_zero: prune }).unwrap().circuit;
        let report = compare_to_spec(&StateVector::run(&circuit).unwrap(), &spec).unwrap();
        prop_assert!(report.max_amp_error <= 1e-10, "{:?}", report);
        prop_assert!(report.ancilla_residual <= 1e-12);
    }

    #[test]
    fn peephole_and_decomposition_preserve_output(n in 2u32..=6, k_frac in 0.0f64..=1.0, seed: u64) {
        let k = (k_frac * f64::from(n)).round() as u32;
        let spec = random_hwk(n, k, seed).unwrap();
        let circuit = synthesize(&spec).unwrap();
        let reference = StateVector::run(&circuit).unwrap();
        let reduced = peephole_cancel_x(&circuit);
        prop_assert_eq!(peephole_cancel_x(&reduced).clone(), reduced.clone());
        prop_assert!(max_diff(&reference, &StateVector::run(&reduced).unwrap()) <= 1e-12);
        let decomposed = decompose_circuit(&circuit);
        prop_assert!(decomposed.uses_only(&GateKind::ROTATION_SET));
        prop_assert!(max_diff(&reference, &StateVector::run(&decomposed).unwrap()) <= 1e-10);
    }
}
