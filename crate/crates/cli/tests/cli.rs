use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("treeharm").chain(args.iter().copied());
    let code = tree_harmonic_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    v["result"].clone()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treeharm"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn spherical_csv_of_the_trivial_parameter() {
    let (code, out, _) = run(&[
        "spherical",
        "--kind",
        "vt",
        "--d",
        "4",
        "--alpha",
        "1",
        "--n",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,phi_num,phi_den");
    assert_eq!(lines.len(), 7);
    for (n, l) in lines[1..].iter().enumerate() {
        assert_eq!(*l, format!("{n},1,1"));
    }
}

#[test]
fn spherical_json_and_principal_series() {
    let r = json(&["spherical", "--kind", "vt", "--d", "4", "--alpha", "1/2", "--n", "2"]);
    assert_eq!(r["phi"], serde_json::json!(["1", "1/2", "0"]));
    assert_eq!(r["in_interval"], true);
    let r = json(&["spherical", "--kind", "vt", "--d", "4", "--s-re", "1"]);
    let a = r["principal"]["alpha"].as_f64().unwrap();
    assert!((a - 3f64.sqrt() / 2.0).abs() < 1e-12);
    let (code, _, err) = run(&["spherical", "--kind", "vt", "--d", "4", "--s-re", "2"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn dynamics_round_trip() {
    let r = json(&["dynamics", "--d", "4", "--alpha", "0.5"]);
    assert_eq!(r["restrict"]["gamma"], "0");
    assert_eq!(r["round_trip"]["alpha_plus"]["exact"], "1/2");
    assert_eq!(r["round_trip"]["alpha_minus"]["exact"], "-1/2");
    let r = json(&["dynamics", "--d", "4", "--alpha", "0"]);
    assert!(r["restrict"]["exceptional_pair"].is_array());
    let r = json(&["dynamics", "--d", "4", "--gamma", "-1/3"]);
    assert_eq!(r["induce"]["exceptional_image"], "0");
    let r = json(&["dynamics", "--d", "4", "--dprime", "6", "--alpha", "-1/5"]);
    assert_eq!(r["base_change"]["alpha_vprime"], "-1/3");
    assert_eq!(r["base_change"]["exceptional_endpoint"], true);
}

#[test]
fn fell_limit_set_at_one() {
    let r = json(&[
        "fell",
        "--kind",
        "two-orbit",
        "--d",
        "4",
        "--dprime",
        "4",
        "--target",
        "1",
    ]);
    assert_eq!(r["limit_set"], serde_json::json!(["trivial", "sigma"]));
    let r = json(&["fell", "--kind", "vt", "--d", "4", "--cuspidal", "2"]);
    assert_eq!(r["model"]["cortex"], serde_json::json!(["trivial", "sigma-"]));
}

#[test]
fn special_and_coset_outputs() {
    let r = json(&["special", "--kind", "vt-plus", "--d", "3", "--n", "10"]);
    assert_eq!(r["relations"]["holds"], true);
    assert_eq!(r["l2_closed_form"], "6");
    let (code, out, _) = run(&[
        "special",
        "--kind",
        "two-orbit",
        "--d",
        "4",
        "--dprime",
        "6",
        "--n",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("edge_coset,1,1,15"));
    let (code, out, _) = run(&["coset", "--kind", "vt", "--d", "3", "--n-max", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("family,n,measure_numerator,measure_denominator,normalization\n"));
    let r = json(&[
        "coset",
        "--kind",
        "vt",
        "--d",
        "3",
        "--n-max",
        "2",
        "--verify-radius",
        "2",
    ]);
    assert_eq!(r["partition"]["all_match"], true);
}

#[test]
fn psd_from_kernel_and_matrix() {
    let r = json(&["psd", "--kind", "vt", "--d", "3", "--alpha", "1/2", "--radius", "2"]);
    assert_eq!(r["dimension"], 10);
    assert_eq!(r["verdict"]["is_psd"], true);
    let m = scratch("psd_bad.json", "[[1, 1.05], [1.05, 1]]");
    let r = json(&["psd", "--matrix", m.to_str().unwrap()]);
    assert_eq!(r["verdict"]["is_psd"], false);
}

#[test]
fn perm_reports() {
    let r = json(&["perm", "--degree", "3", "--gen", "(1 2)", "--gen", "(1 2 3)"]);
    assert_eq!(r["order"], 6);
    assert_eq!(r["conjugacy_classes"], 3);
    assert_eq!(r["standard_rep_exists"], true);
    let r = json(&["perm", "--degree", "4", "--group", "cyclic"]);
    assert_eq!(r["two_transitive"], false);
    assert_eq!(r["orbits_on_pairs"], 4);
    assert!(r["standard_rep_exists"].is_null());
    let (code, _, _) = run(&["perm", "--degree", "3", "--gen", "(1 4)"]);
    assert_eq!(code, 2);
}

#[test]
fn radu_membership_with_an_automorphism_file() {
    // swap the two leaves "0/0" and "0/1" below the type-1 vertex "0"
    let f = scratch("odd_at_0.json", r#"{"0/0": "0/1", "0/1": "0/0"}"#);
    let r = json(&[
        "radu",
        "membership",
        "--kind",
        "vt",
        "--d",
        "4",
        "--radius",
        "2",
        "--family",
        "plus_y0_y1",
        "--y0",
        "0",
        "--y1",
        "0",
        "--automorphism",
        f.to_str().unwrap(),
    ]);
    assert_eq!(r["report"]["verdict"], "violated");
    assert_eq!(r["report"]["conditions"][2]["verdict"], "violated");
    let r = json(&[
        "radu",
        "local-action",
        "--kind",
        "vt",
        "--d",
        "4",
        "--radius",
        "2",
        "--vertex",
        "0",
        "--automorphism",
        f.to_str().unwrap(),
    ]);
    assert_eq!(r["sign"], -1);
    let (code, _, err) = run(&[
        "radu",
        "membership",
        "--kind",
        "vt",
        "--d",
        "4",
        "--radius",
        "2",
        "--family",
        "7",
    ]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("Y0"));
}

#[test]
fn brute_checks() {
    let r = json(&[
        "brute", "ipk", "--kind", "vt", "--d", "3", "--radius", "3", "--k", "1", "--edge", "root,0",
    ]);
    assert_eq!(r["holds"], true);
    let r = json(&[
        "brute",
        "factorization",
        "--kind",
        "vt",
        "--d",
        "3",
        "--radius",
        "3",
        "--u",
        "v:root:1",
        "--v",
        "v:1:1",
    ]);
    assert_eq!(r["witness"], "B({root, 1}, 0)");
    let (code, _, _) = run(&[
        "brute",
        "factorization",
        "--kind",
        "vt",
        "--d",
        "3",
        "--radius",
        "3",
        "--u",
        "x:1",
        "--v",
        "v:1:1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["spherical", "--kind", "vt"]).0, 2);
    assert_eq!(run(&["spherical", "--kind", "vt", "--d", "4", "--alpha", "abc"]).0, 2);
    assert_eq!(
        run(&["spherical", "--kind", "two-orbit", "--d", "4", "--alpha", "1"]).0,
        2
    );
    assert_eq!(run(&["dynamics", "--d", "4", "--alpha", "3/2"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn binary_is_deterministic() {
    let args = ["fell", "--kind", "vt", "--d", "5", "--cuspidal", "3", "--target", "-1"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn enumeration_cap_from_environment() {
    let args = ["brute", "order", "--kind", "vt", "--d", "3", "--radius", "3"];
    let ok = bin().args(args).output().unwrap();
    assert!(ok.status.success());
    let capped = bin()
        .args(args)
        .env(tree_harmonic_cli::CAP_ENV, "100")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("100"));
    let bad = bin()
        .args(args)
        .env(tree_harmonic_cli::CAP_ENV, "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
