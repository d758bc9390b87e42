//! QASM export is pinned byte-for-byte. Set `UPDATE_GOLDEN=1` to rewrite.

use std::fs;
use std::path::PathBuf;

use modp_qfa::circuit::qasm::{from_qasm, to_qasm};
use modp_qfa::circuit::{build, BuildSpec, NaiveVariant, Variant};
use modp_qfa::synthesis::{transpile, BasisSet, DecompositionStyle};

fn cases() -> Vec<(&'static str, String)> {
    let qasm = |spec: BuildSpec| to_qasm(&build(&spec).unwrap()).unwrap();
    let naive = |v| Variant::Naive(v);
    vec![
        (
            "single_p7_k1_m3",
            qasm(BuildSpec::new(7, [1], 3, Variant::Single)),
        ),
        (
            "naive_alternating_p11_m3",
            qasm(BuildSpec::new(
                11,
                [1, 2, 4, 8],
                3,
                naive(NaiveVariant::Alternating),
            )),
        ),
        (
            "naive_improved_margolus_p11_m1",
            qasm(
                BuildSpec::new(11, [1, 2, 4, 8], 1, naive(NaiveVariant::Improved))
                    .with_decomposition(DecompositionStyle::Margolus),
            ),
        ),
        (
            "naive_plain_ancilla_p7_m1",
            qasm(
                BuildSpec::new(7, [1, 2, 3, 4], 1, naive(NaiveVariant::Plain))
                    .with_decomposition(DecompositionStyle::AncillaToffoli),
            ),
        ),
        (
            "optimized_p11_m2",
            qasm(BuildSpec::new(11, [2, 4, 8], 2, Variant::Optimized)),
        ),
        (
            "parallel_p11_m2",
            qasm(BuildSpec::new(11, [1, 2, 4], 2, Variant::Parallel)),
        ),
        ("optimized_p11_m1_legacy", {
            let c = build(&BuildSpec::new(11, [2, 4, 8], 1, Variant::Optimized)).unwrap();
            to_qasm(&transpile(&c, BasisSet::Legacy).unwrap()).unwrap()
        }),
    ]
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn qasm_matches_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, text) in cases() {
        let path = golden_dir().join(format!("{name}.qasm"));
        if update {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, want, "{name} drifted from its golden file");
    }
}

#[test]
fn golden_files_reparse_identically() {
    for (name, _) in cases() {
        let text = fs::read_to_string(golden_dir().join(format!("{name}.qasm"))).unwrap();
        let c = from_qasm(&text).unwrap();
        assert_eq!(to_qasm(&c).unwrap(), text, "{name}");
    }
}

#[test]
fn structural_expectations() {
    let all = cases();
    let get = |n: &str| &all.iter().find(|(k, _)| *k == n).unwrap().1;
    let single = get("single_p7_k1_m3");
    assert_eq!(single.lines().filter(|l| l.starts_with("ry(")).count(), 3);
    assert!(!get("parallel_p11_m2").lines().any(|l| l.starts_with("cx ")));
    assert!(get("naive_improved_margolus_p11_m1").contains("gate margolus"));
}
