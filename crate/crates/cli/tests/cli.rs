use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn nachbin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nachbin")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn validate_chain() {
    let (code, out, _) = nachbin(&["validate", "--poset", &fixture("chain2.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"status\": \"pass\""));
}

#[test]
fn validate_reports_antisymmetry_counterexample() {
    let (code, out, _) = nachbin(&["validate", "--poset", &fixture("cycle2.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample:"));
    let (code, _, _) = nachbin(&["validate", "--poset", &fixture("cycle2.json"), "--expect-quasi"]);
    assert_eq!(code, 0);
}

#[test]
fn malformed_inputs_exit_2() {
    let chain = fixture("chain2.json");
    let cases: Vec<Vec<String>> = vec![
        vec!["validate".into(), "--poset".into(), fixture("garbage.json")],
        vec!["validate".into(), "--poset".into(), fixture("bad_poset.json")],
        vec!["validate".into(), "--function".into(), fixture("bad_rational.json")],
        vec!["validate".into(), "--poset".into(), fixture("missing.json")],
        vec!["envelope".into(), "--poset".into(), chain.clone(), "--function".into(), fixture("vee_f.json")],
        vec!["sw-approx".into(), "--poset".into(), chain.clone(), "--function".into(), fixture("f_down.json"), "--eps".into(), "1/8".into()],
        vec!["sw-approx".into(), "--poset".into(), chain.clone(), "--function".into(), fixture("f_up.json"), "--eps".into(), "0".into()],
        vec!["sw-approx".into(), "--poset".into(), chain.clone(), "--function".into(), fixture("f_up.json"), "--eps".into(), "2/4".into()],
        vec!["prox".into(), "--oracle".into(), "r2".into(), "--poset".into(), chain, "--a".into(), fixture("r2_f.json"), "--b".into(), fixture("r2_g.json")],
        vec!["frobnicate".into()],
        vec!["axioms".into(), "--oracle".into(), "r3".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = nachbin(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn spectrum_rejects_quasi_poset() {
    let (code, _, err) = nachbin(&["spectrum", "--poset", &fixture("cycle2.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("antisymmetry"));
    let (code, out, _) = nachbin(&["spectrum", "--poset", &fixture("vee.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("M_a") && out.contains("M_c"));
}

#[test]
fn r2_induced_order_is_quasi() {
    let (code, out, _) = nachbin(&["induced-order", "--oracle", "r2", "--expect-quasi"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("order fails antisymmetry"));
    assert!(out.contains("\"nachbin\": false"));
    let (code, out, _) = nachbin(&["induced-order", "--oracle", "r2"]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample:"));
}

#[test]
fn expect_quasi_fails_on_partial_order() {
    let (code, _, _) = nachbin(&["induced-order", "--poset", &fixture("vee.json"), "--expect-quasi"]);
    assert_eq!(code, 1);
    let (code, out, _) = nachbin(&["induced-order", "--poset", &fixture("vee.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("M_a <= M_c"));
}

#[test]
fn axioms_r2_pass() {
    let (code, out, _) = nachbin(&["axioms", "--oracle", "r2", "--samples", "500", "--seed", "42"]);
    assert_eq!(code, 0, "{out}");
    for a in ["P1", "P5", "RP5", "P9"] {
        assert!(out.contains(&format!("check r2 {a}: pass")), "{a}");
    }
}

#[test]
fn devries_p11_fails_on_chain() {
    let (code, out, _) = nachbin(&["axioms", "--poset", &fixture("chain2.json"), "--devries", "--samples", "200"]);
    assert_eq!(code, 1);
    assert!(out.contains("P11: FAIL"));
    assert!(out.contains("\"check\":\"P11\""));
}

#[test]
fn skeleton_documents_accepted() {
    for s in ["skel_quasi.json", "skel_gen.json"] {
        let (code, out, err) = nachbin(&["axioms", "--skeleton", &fixture(s), "--samples", "200"]);
        assert_eq!(code, 0, "{s}: {out}{err}");
    }
}

#[test]
fn envelope_and_prox() {
    let chain = fixture("chain2.json");
    let (code, out, _) = nachbin(&["envelope", "--poset", &chain, "--function", &fixture("f_down.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("{c0: 1, c1: 1}"));
    let (code, out, _) = nachbin(&["envelope", "--poset", &chain, "--function", &fixture("f_down.json"), "--direction", "lower"]);
    assert_eq!(code, 0);
    assert!(out.contains("{c0: 0, c1: 0}"));
    let (_, out, _) = nachbin(&["prox", "--poset", &chain, "--a", &fixture("f_down.json"), "--b", &fixture("g_ones.json")]);
    assert!(out.contains("\"holds\": true"));
    let (code, out, _) = nachbin(&["prox", "--poset", &chain, "--a", &fixture("f_down.json"), "--b", &fixture("g_half.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("\"holds\": false"));
}

#[test]
fn roundtrip_and_adjunction() {
    let (code, out, _) = nachbin(&["roundtrip", "--poset", &fixture("vee.json"), "--samples", "300"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = nachbin(&["adjunction", "--poset", &fixture("chain2.json"), "--space", &fixture("chain2.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("monotone maps X -> X_A: 3"));
}

#[test]
fn approximations() {
    let (code, out, _) =
        nachbin(&["sw-approx", "--poset", &fixture("vee.json"), "--function", &fixture("vee_f.json"), "--eps", "1/8"]);
    assert_eq!(code, 0, "{out}");
    let chain = fixture("chain2.json");
    let (code, out, _) = nachbin(&["dieudonne", "--poset", &chain, "--f", &fixture("f_down.json"), "--g", &fixture("g_ones.json"), "--steps", "10"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("limit witness: {c0: 1, c1: 1}"));
    let (code, _, _) = nachbin(&[
        "dieudonne", "--poset", &chain, "--f", &fixture("f_down.json"), "--g", &fixture("g_ones.json"), "--perturbed",
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = nachbin(&["dieudonne", "--poset", &chain, "--f", &fixture("f_down.json"), "--g", &fixture("g_half.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample:"));
    let (code, _, _) = nachbin(&["dieudonne", "--oracle", "r2", "--f", &fixture("r2_f.json"), "--g", &fixture("r2_g.json"), "--steps", "8"]);
    assert_eq!(code, 0);
}

#[test]
fn pq_roundtrip_passes() {
    for p in ["chain2.json", "vee.json"] {
        let (code, out, _) = nachbin(&["pq-roundtrip", "--poset", &fixture(p), "--samples", "100"]);
        assert_eq!(code, 0, "{out}");
    }
    let (code, _, _) = nachbin(&["pq-roundtrip", "--oracle", "r2", "--samples", "100"]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["axioms", "--poset", &fixture("vee.json"), "--devries", "--samples", "300", "--seed", "7"];
    let first = nachbin(&args);
    for _ in 0..3 {
        assert_eq!(nachbin(&args), first);
    }
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = nachbin(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("induced-order"));
}
