use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn skein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(args)
        .output()
        .expect("failed to spawn skein")
}

fn json_ok(args: &[&str]) -> Value {
    let out = skein(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

fn is_one(v: &Value) -> bool {
    v["den"] == 1
        && v["num"]
            .as_array()
            .unwrap()
            .iter()
            .enumerate()
            .all(|(i, c)| *c == i64::from(i == 0))
}

#[test]
fn verify_two_theory_suite_passes() {
    let out = skein(&["verify", "--suite", "2theory"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let ids: Vec<&str> = v["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["AC01", "AC02", "AC03", "AC04", "AC05"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn s1_x_s2_bracket_is_one_in_every_theory() {
    let path = fixture("s1xs2.json");
    for p in ["1", "2", "3", "5", "6", "7", "10"] {
        let v = json_ok(&["invariant", "--theory", p, "--pattern", &path]);
        assert!(is_one(&v["bracket"]), "p={p}: {}", v["bracket"]);
        assert_eq!(v["beta1"], 1);
        assert_eq!(v["signature"], 0);
        assert_eq!(v["decimal"]["bracket"], "1.000000000000");
    }
}

#[test]
fn s3_integral_invariant_is_one() {
    let v = json_ok(&[
        "invariant",
        "--theory",
        "5",
        "--pattern",
        &fixture("s3.json"),
        "--normalization",
        "I",
    ]);
    assert!(is_one(&v["I"]));
    assert!(v.get("bracket").is_none());
}

#[test]
fn other_presentations_evaluate() {
    json_ok(&[
        "invariant",
        "--theory",
        "7",
        "--pattern",
        &fixture("pair.json"),
    ]);
    json_ok(&[
        "invariant",
        "--theory",
        "2",
        "--pattern",
        &fixture("matrix3.json"),
    ]);
}

#[test]
fn linking_matrix_needs_small_theory() {
    let out = skein(&[
        "invariant",
        "--theory",
        "5",
        "--pattern",
        &fixture("matrix3.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_two() {
    for name in [
        "truncated.json",
        "unknown_field.json",
        "cyclic.json",
        "does_not_exist.json",
    ] {
        let out = skein(&["invariant", "--theory", "3", "--pattern", &fixture(name)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty(), "{name}");
        assert!(!out.stderr.is_empty(), "{name}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(skein(&[]).status.code(), Some(2));
    assert_eq!(skein(&["units", "--theory", "4"]).status.code(), Some(2));
    assert_eq!(
        skein(&["pairing", "--theory", "5", "--x", "q", "--y", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        skein(&["fkb", "--theory", "2", "--torus", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        skein(&["verify", "--suite", "everything"]).status.code(),
        Some(2)
    );
}

#[test]
fn fkb_of_solid_torus_is_unit_ideal() {
    let v = json_ok(&["fkb", "--theory", "2", "--torus", "1,0"]);
    assert_eq!(v["classification"], "O");
    let hnf = v["ideal"]["hnf"].as_array().unwrap();
    assert_eq!(hnf.len(), 4);
    for (i, row) in hnf.iter().enumerate() {
        for (j, c) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(*c, i64::from(i == j));
        }
    }
}

#[test]
fn fkb_two_theory_eyeglass_runs() {
    let v = json_ok(&["fkb", "--theory", "2", "--eyeglass", "1,1,0,0"]);
    assert!(v["ideal"]["level"] == 8);
}

#[test]
fn fkb_factor_r3_holds_with_equality() {
    let v = json_ok(&["fkb-factor", "--r", "3", "--torus", "2,1"]);
    assert_eq!(v["containment_holds"], true);
    assert_eq!(v["equality_holds"], true);
}

#[test]
fn two_theory_pairings() {
    let one = json_ok(&[
        "pairing", "--theory", "2", "--x", "1", "--y", "1", "--form", "bracket",
    ]);
    assert_eq!(one["decimal"], "1.000000000000");
    let zz = json_ok(&[
        "pairing", "--theory", "2", "--x", "z", "--y", "z", "--form", "bracket",
    ]);
    assert_eq!(zz["decimal"], "4.000000000000");
    let mixed = json_ok(&[
        "pairing", "--theory", "2", "--x", "1", "--y", "z", "--form", "bracket",
    ]);
    assert_eq!(mixed["decimal"], "0.000000000000");
}

#[test]
fn basis_check_reports_unit_determinant() {
    let v = json_ok(&["basis-check", "--theory", "5", "--family", "first_su2"]);
    assert_eq!(v["det_is_unit"], true);
    let g = json_ok(&[
        "gram",
        "--theory",
        "2",
        "--family",
        "two_theory_genus_g",
        "--genus",
        "2",
    ]);
    assert_eq!(g["gram"].as_array().unwrap().len(), 4);
}

#[test]
fn units_at_twice_odd_prime() {
    let v = json_ok(&["units", "--theory", "10"]);
    let rows = v["quantum_integers"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["is_unit"] == true));
}

#[test]
fn output_is_deterministic() {
    let args = ["theory", "--theory", "14"];
    let a = skein(&args).stdout;
    let b = skein(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let v = ["verify", "--suite", "fkb"];
    let serial = Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(v)
        .env("SKEIN_NUM_THREADS", "1")
        .output()
        .unwrap();
    let wide = Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(v)
        .env("SKEIN_NUM_THREADS", "8")
        .output()
        .unwrap();
    assert_eq!(serial.stdout, wide.stdout);
}
