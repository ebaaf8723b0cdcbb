//! Cross-module properties on randomized inputs.

use proptest::prelude::*;

use zsim_core::circuit::{GateInstance, GateKind, QuantumCircuit};
use zsim_core::density::DensityMatrix;
use zsim_core::qasm::{emit_qasm, parse_qasm};
use zsim_core::state::Statevector;

#[derive(Debug, Clone)]
enum GateSpec {
    One(GateKind, usize),
    Two(GateKind, usize, usize),
    Barrier(usize),
    Measure(usize, usize),
}

fn gate_strategy(n_qubits: usize, n_clbits: usize) -> impl Strategy<Value = GateSpec> {
    let one = (
        prop::sample::select(vec![
            GateKind::H,
            GateKind::X,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
        ]),
        1..=n_qubits,
    )
        .prop_map(|(k, q)| GateSpec::One(k, q));
    let two = (
        prop::sample::select(vec![GateKind::Cnot, GateKind::Cz]),
        1..=n_qubits,
        1..=n_qubits,
    )
        .prop_filter_map("distinct targets", |(k, a, b)| {
            (a != b).then_some(GateSpec::Two(k, a, b))
        });
    let barrier = (1..=n_qubits).prop_map(GateSpec::Barrier);
    let measure =
        (1..=n_qubits, 1..=n_clbits).prop_map(|(q, c)| GateSpec::Measure(q, c));
    prop_oneof![4 => one, 3 => two, 1 => barrier, 1 => measure]
}

fn build_circuit(n_qubits: usize, n_clbits: usize, specs: &[GateSpec]) -> QuantumCircuit {
    let mut c = QuantumCircuit::new(n_qubits, n_clbits);
    for spec in specs {
        match spec {
            GateSpec::One(k, q) => c.push(GateInstance::new(*k, vec![*q]).unwrap()).unwrap(),
            GateSpec::Two(k, a, b) => {
                c.push(GateInstance::new(*k, vec![*a, *b]).unwrap()).unwrap()
            }
            GateSpec::Barrier(q) => c.barrier(*q).unwrap(),
            GateSpec::Measure(q, cl) => c.measure(*q, *cl).unwrap(),
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qasm_round_trip_on_random_circuits(
        n_qubits in 1usize..=6,
        specs in prop::collection::vec(gate_strategy(6, 4), 0..40),
    ) {
        let specs: Vec<GateSpec> = specs
            .into_iter()
            .filter(|s| match s {
                GateSpec::One(_, q) | GateSpec::Barrier(q) | GateSpec::Measure(q, _) => {
                    *q <= n_qubits
                }
                GateSpec::Two(_, a, b) => *a <= n_qubits && *b <= n_qubits,
            })
            .collect();
        let circuit = build_circuit(n_qubits, 4, &specs);
        let text = emit_qasm(&circuit).unwrap();
        let back = parse_qasm(&text).unwrap();
        prop_assert_eq!(circuit, back);
    }

    #[test]
    fn density_and_statevector_evolution_agree(
        n_qubits in 1usize..=5,
        specs in prop::collection::vec(gate_strategy(5, 1), 0..30),
    ) {
        let specs: Vec<GateSpec> = specs
            .into_iter()
            .filter(|s| match s {
                GateSpec::One(_, q) | GateSpec::Barrier(q) => *q <= n_qubits,
                GateSpec::Two(_, a, b) => *a <= n_qubits && *b <= n_qubits,
                GateSpec::Measure(..) => false,
            })
            .collect();
        let circuit = build_circuit(n_qubits, 1, &specs);
        let psi = Statevector::zero(n_qubits).run_circuit(&circuit).unwrap();
        prop_assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        let via_state = DensityMatrix::from_state(&psi);
        let via_density = DensityMatrix::from_state(&Statevector::zero(n_qubits))
            .evolve(&circuit)
            .unwrap();
        for (a, b) in via_state.entries().iter().zip(via_density.entries()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn parser_never_panics_on_arbitrary_input(text in ".{0,200}") {
        // errors are fine, panics are not
        let _ = parse_qasm(&text);
    }

    #[test]
    fn parser_never_panics_on_qasm_like_input(
        body in prop::collection::vec(
            prop::sample::select(vec![
                "h q[0];", "cx q[0],q[1];", "measure q[1] -> c[0];",
                "barrier q[2];", "z q[9];", "h r[0];", "qreg q[3];",
                "creg c[2];", "include \"qelib1.inc\";", "h q[;", "-> ;", "//x",
            ]),
            0..20,
        ),
    ) {
        let text = format!("OPENQASM 2.0;\n{}", body.join("\n"));
        let _ = parse_qasm(&text);
    }

    #[test]
    fn counts_are_reproducible_for_equal_seeds(
        seed in any::<u64>(),
        specs in prop::collection::vec(gate_strategy(3, 1), 1..15),
    ) {
        let specs: Vec<GateSpec> = specs
            .into_iter()
            .filter(|s| !matches!(s, GateSpec::Measure(..)))
            .collect();
        let circuit = build_circuit(3, 1, &specs);
        let psi = Statevector::zero(3).run_circuit(&circuit).unwrap();
        let a = psi.sample_counts(&[1, 2, 3], 512, seed).unwrap();
        let b = psi.sample_counts(&[1, 2, 3], 512, seed).unwrap();
        prop_assert_eq!(&a, &b);
        a.validate().unwrap();
        prop_assert_eq!(a.counts.values().sum::<u64>(), 512);
    }
}
