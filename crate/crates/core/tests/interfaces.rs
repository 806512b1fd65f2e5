use std::io::BufReader;

use pathgrid::constructions::{alpha_formula, build_vk, ConstructionKind, ConstructionSpec};
use pathgrid::report::{run_verify, run_verify_all, VerifyConfig};
use pathgrid::search::{max_independent_set, SearchBudget};
use pathgrid::signed::{self, read_matrix_market, Parity};
use pathgrid::{PathPower, VertexSet};

#[test]
fn matrix_market_round_trip() {
    for (parity, n, k) in [(Parity::Odd3, 1, 3), (Parity::Even, 1, 4), (Parity::Even, 3, 2)] {
        let a = signed::build(parity, n, k, 1 << 16).unwrap();
        let mut buf = Vec::new();
        a.write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate integer symmetric\n"));
        let back = read_matrix_market(BufReader::new(&buf[..])).unwrap();
        assert_eq!(back, a.to_int());
    }
}

#[test]
fn matrix_market_rejects_garbage() {
    for bad in ["", "%%MatrixMarket matrix array real general\n2 2\n", "%%MatrixMarket matrix coordinate integer symmetric\n2 2 1\n3 1 1\n"] {
        assert!(read_matrix_market(BufReader::new(bad.as_bytes())).is_err(), "{bad:?}");
    }
}

#[test]
fn vertex_set_json_round_trip() {
    for kind in [ConstructionKind::Vk, ConstructionKind::VkComplement, ConstructionKind::Xk, ConstructionKind::XkComplement] {
        let s = ConstructionSpec::new(5, 2, kind).unwrap().build(1 << 16).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: VertexSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back.ranks(), s.ranks());
        assert_eq!(back.graph().m(), 5);
    }
    let bad = r#"{"m":3,"k":1,"ranks":[3]}"#;
    assert!(serde_json::from_str::<VertexSet>(bad).is_err());
}

#[test]
fn alpha_search_matches_formula_up_to_27_vertices() {
    for m in 2u32..=27 {
        for k in 1u32.. {
            let Some(n) = m.checked_pow(k).filter(|&n| n <= 27) else { break };
            let g = PathPower::new(m, k).unwrap();
            let r = max_independent_set(&g, &SearchBudget::default()).unwrap();
            assert!(r.proven_optimal);
            assert_eq!(r.size as u128, alpha_formula(m, k), "m={m} k={k} n={n}");
            assert_eq!(build_vk(m, k).unwrap().len(), r.size);
        }
    }
}

#[test]
fn verify_all_is_deterministic() {
    let a = run_verify_all(729, 1e-8, 42);
    let b = run_verify_all(729, 1e-8, 42);
    assert!(a.passed);
    assert_eq!(
        serde_json::to_string(&a.payload()).unwrap(),
        serde_json::to_string(&b.payload()).unwrap()
    );
    let c = run_verify_all(729, 1e-8, 43);
    assert!(c.passed);
}

#[test]
fn verify_all_negative_control() {
    let r = run_verify(&VerifyConfig { corrupt_matrices: true, ..VerifyConfig::default() });
    assert!(!r.passed);
    let failed: Vec<_> = r.failed().map(|c| c.name.clone()).collect();
    for name in ["odd-spectra", "even-spectra", "exact-integer-structure", "huang-bound-chain"] {
        assert!(failed.iter().any(|f| f == name), "{name} not flagged: {failed:?}");
    }
    assert!(r.checks.iter().find(|c| c.name == "beta-values").unwrap().passed);
}
