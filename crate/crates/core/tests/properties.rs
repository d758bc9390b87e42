use std::f64::consts::PI;

use modp_qfa::automaton::{closed_form_acceptance, make_mod_p_direct_sum, Scheme, Word};
use modp_qfa::circuit::qasm::{from_qasm, to_qasm};
use modp_qfa::circuit::{
    apply_gate, build, circuit_unitary, simulate, BuildSpec, Circuit, Gate, NaiveVariant, Variant,
};
use modp_qfa::ksearch::{max_error, SearchScheme};
use modp_qfa::linalg::{
    equal_up_to_global_phase, kron, mat_vec, Amplitude, StateVector, UnitaryMatrix,
};
use modp_qfa::sampling::{sample, NoiseModel};
use modp_qfa::synthesis::{
    cancel_adjacent_x, fuse_ry_runs, lower_controlled, transpile, BasisSet, DecompositionStyle,
};
use proptest::prelude::*;

const PRIMES: [u64; 3] = [7, 11, 31];

fn angle() -> impl Strategy<Value = f64> {
    -2.0 * PI..2.0 * PI
}

/// One random gate on at most `n` qubits; kinds with more wires than `n`
/// fall back to a single-qubit rotation.
fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (
        0u8..13,
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        angle(),
        angle(),
        angle(),
    )
        .prop_map(move |(kind, q, a, b, c)| {
            let needs = match kind {
                8..=10 => 2,
                11 | 12 => 3,
                _ => 1,
            };
            if needs > n {
                return Gate::ry(a, q[0]);
            }
            match kind {
                0 => Gate::h(q[0]),
                1 => Gate::x(q[0]),
                2 => Gate::sx(q[0]),
                3 => Gate::rz(a, q[0]),
                4 => Gate::ry(a, q[0]),
                5 => Gate::u1(a, q[0]),
                6 => Gate::u2(a, b, q[0]),
                7 => Gate::u3(a, b, c, q[0]),
                8 => Gate::cx(q[0], q[1]),
                9 => Gate::cry(a, q[0], q[1]),
                10 => Gate::ry(a, q[1]),
                11 => Gate::ccx(q[0], q[1], q[2]),
                _ => Gate::margolus(q[0], q[1], q[2]),
            }
        })
}

fn circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_qubits).prop_flat_map(move |n| {
        prop::collection::vec(gate(n), 0..=max_gates).prop_map(move |gates| {
            let mut c = Circuit::new(n);
            c.extend(gates).expect("generated gates are valid");
            c.measure_all();
            c
        })
    })
}

fn unit_vector(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v
                .into_iter()
                .map(|(a, b)| Amplitude::new(a / norm, b / norm))
                .collect();
            StateVector::new(amps).unwrap()
        })
}

fn small_unitary() -> impl Strategy<Value = UnitaryMatrix> {
    circuit(2, 6).prop_map(|c| circuit_unitary(&c).unwrap())
}

fn prime_and_ks(max_d: usize) -> impl Strategy<Value = (u64, Vec<u64>)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(move |p| {
        (Just(p), prop::collection::btree_set(1..p, 1..=max_d))
            .prop_map(|(p, s)| (p, s.into_iter().collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_preserve_norm(c in circuit(3, 20), v in unit_vector(8)) {
        let c3 = c.widened(3);
        let u = circuit_unitary(&c3).unwrap();
        let w = mat_vec(&u, &v).unwrap();
        prop_assert!((w.norm_sqr().sqrt() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kron_is_associative(a in small_unitary(), b in small_unitary(), c in small_unitary()) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        for (x, y) in left.entries().iter().zip(right.entries()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_gate_matches_unitary(g in gate(3)) {
        let mut one = Circuit::new(3);
        one.push(g.clone()).unwrap();
        let u = circuit_unitary(&one).unwrap();
        for idx in 0..8 {
            let basis = StateVector::basis(8, idx);
            let a = apply_gate(&basis, &g).unwrap();
            let b = mat_vec(&u, &basis).unwrap();
            prop_assert!(a.max_deviation(&b) < 1e-12);
        }
    }

    #[test]
    fn transpile_preserves_unitary(c in circuit(4, 50)) {
        let want = circuit_unitary(&c).unwrap();
        for basis in BasisSet::ALL {
            let out = transpile(&c, basis).unwrap();
            prop_assert!(out.gates().iter().all(|g| basis.is_native(g)));
            prop_assert!(equal_up_to_global_phase(&want, &circuit_unitary(&out).unwrap(), 1e-9));
        }
    }

    #[test]
    fn peephole_passes_preserve_unitary(c in circuit(3, 30)) {
        let want = circuit_unitary(&c).unwrap();
        let fused = fuse_ry_runs(&c).unwrap();
        let cancelled = cancel_adjacent_x(&c).unwrap();
        prop_assert!(equal_up_to_global_phase(&want, &circuit_unitary(&fused).unwrap(), 1e-9));
        prop_assert!(equal_up_to_global_phase(&want, &circuit_unitary(&cancelled).unwrap(), 1e-9));
    }

    #[test]
    fn fusion_is_idempotent(c in circuit(3, 30)) {
        let once = fuse_ry_runs(&c).unwrap();
        prop_assert_eq!(fuse_ry_runs(&once).unwrap(), once);
    }

    #[test]
    fn qasm_round_trip(c in circuit(4, 30)) {
        let text = to_qasm(&c).unwrap();
        let back = from_qasm(&text).unwrap();
        prop_assert_eq!(to_qasm(&back).unwrap(), text);
        prop_assert_eq!(back.n_qubits(), c.n_qubits());
        prop_assert_eq!(back.len(), c.len());
        prop_assert!(equal_up_to_global_phase(
            &circuit_unitary(&c).unwrap(),
            &circuit_unitary(&back).unwrap(),
            1e-9
        ));
    }

    #[test]
    fn automaton_stays_normalized((p, ks) in prime_and_ks(4), m in 0usize..70) {
        let machine = make_mod_p_direct_sum(p, &ks).unwrap();
        let acc = machine.run(&Word::unary(m)).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&acc));
        let want = closed_form_acceptance(p, &ks, m as u64, Scheme::DirectSum);
        prop_assert!((acc - want).abs() < 1e-9);
    }

    #[test]
    fn members_accepted((p, ks) in prime_and_ks(3), mult in 0usize..3) {
        let m = mult * p as usize;
        for scheme in [Scheme::DirectSum, Scheme::Parallel] {
            prop_assert!((closed_form_acceptance(p, &ks, m as u64, scheme) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn builders_are_deterministic((p, ks) in prime_and_ks(3), m in 0usize..12) {
        let spec = BuildSpec::new(p, ks, m, Variant::Parallel);
        prop_assert_eq!(
            to_qasm(&build(&spec).unwrap()).unwrap(),
            to_qasm(&build(&spec).unwrap()).unwrap()
        );
    }

    #[test]
    fn max_error_invariant_under_units((p, ks) in prime_and_ks(3), c in 1u64..31) {
        let c = c % p;
        prop_assume!(c != 0);
        let scaled: Vec<u64> = ks.iter().map(|k| k * c % p).collect();
        for scheme in [SearchScheme::Parallel, SearchScheme::DirectSum] {
            let a = max_error(p, &ks, scheme).unwrap();
            let b = max_error(p, &scaled, scheme).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a < 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn max_error_matches_simulation((p, ks) in prime_and_ks(3).prop_filter("three", |(_, k)| k.len() == 3)) {
        let by_circuit = (1..p as usize)
            .map(|m| {
                let c = build(&BuildSpec::new(p, ks.clone(), m, Variant::Parallel)).unwrap();
                simulate(&c).unwrap().all_zeros()
            })
            .fold(0.0, f64::max);
        let closed = max_error(p, &ks, SearchScheme::Parallel).unwrap();
        prop_assert!((by_circuit - closed).abs() < 1e-9);

        let opt = (1..p as usize)
            .map(|m| {
                let c = build(&BuildSpec::new(p, ks.clone(), m, Variant::Optimized)).unwrap();
                simulate(&c).unwrap().all_zeros()
            })
            .fold(0.0, f64::max);
        let closed = max_error(p, &ks, SearchScheme::Optimized).unwrap();
        prop_assert!((opt - closed).abs() < 1e-9);
    }

    #[test]
    fn naive_variants_agree(
        (p, ks) in prime_and_ks(4).prop_filter("four", |(_, k)| k.len() == 4),
        m in 0usize..20,
    ) {
        let acc = |v, style: Option<DecompositionStyle>| {
            let mut spec = BuildSpec::new(p, ks.clone(), m, Variant::Naive(v));
            if let Some(s) = style {
                spec = spec.with_decomposition(s);
            }
            simulate(&build(&spec).unwrap()).unwrap().all_zeros()
        };
        let base = acc(NaiveVariant::Plain, None);
        for v in [NaiveVariant::Improved, NaiveVariant::Alternating] {
            prop_assert!((acc(v, None) - base).abs() < 1e-9);
            for style in DecompositionStyle::ALL {
                prop_assert!((acc(v, Some(style)) - base).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sampling_is_seed_stable(c in circuit(3, 12), seed in any::<u64>(), p in 0.0f64..0.3) {
        let noise = NoiseModel::new(p, p, p / 2.0).unwrap();
        let a = sample(&c, 500, &noise, seed).unwrap();
        prop_assert_eq!(a.counts.values().sum::<u64>(), 500);
        prop_assert_eq!(a, sample(&c, 500, &noise, seed).unwrap());
    }

    #[test]
    fn lowering_keeps_acceptance(
        (p, ks) in prime_and_ks(4).prop_filter("four", |(_, k)| k.len() == 4),
        m in 0usize..8,
    ) {
        let c = build(&BuildSpec::new(p, ks, m, Variant::Naive(NaiveVariant::Improved))).unwrap();
        let want = simulate(&c).unwrap().all_zeros();
        for style in DecompositionStyle::ALL {
            let low = lower_controlled(&c, style).unwrap();
            for basis in BasisSet::ALL {
                let t = transpile(&low, basis).unwrap();
                prop_assert!((simulate(&t).unwrap().all_zeros() - want).abs() < 1e-9);
            }
        }
    }
}
