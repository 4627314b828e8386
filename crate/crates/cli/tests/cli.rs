//! End-to-end command tests against the built binary.

use std::process::Command;

fn corolla(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_corolla"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let (stdout, code) = corolla(args);
    (
        serde_json::from_str(&stdout).expect("stdout is one JSON document"),
        code,
    )
}

#[test]
fn dw_count_z2_example() {
    let (v, code) = json(&["dw-count", "-g", "Z2", "--genus", "0", "--monodromy", "e,e,e"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], "4");
}

#[test]
fn dw_count_accepts_inverse_powers() {
    let (v, code) = json(&["dw-count", "-g", "Z4", "--genus", "1", "--monodromy", "a,a^-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], "64");
}

#[test]
fn strata_trivial_11() {
    let (v, code) = json(&["strata", "--genus", "1", "-n", "1", "-g", "trivial"]);
    assert_eq!(code, 0);
    assert_eq!(v["classes"], 2);
    let orders: Vec<u64> = v["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["automorphisms"].as_u64().unwrap())
        .collect();
    assert!(orders.contains(&2));
}

#[test]
fn group_info_s3() {
    let (v, code) = json(&["group-info", "-g", "S3"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 6);
    assert_eq!(v["abelian"], false);
    assert_eq!(v["conjugacy_classes"].as_array().unwrap().len(), 3);
}

#[test]
fn loop_groupoid_and_algebra_z2() {
    let (v, code) = json(&["loop-groupoid", "-g", "Z2"]);
    assert_eq!(code, 0);
    assert_eq!(v["objects"], 2);
    assert_eq!(v["morphisms"].as_array().unwrap().len(), 4);
    let (v, code) = json(&["groupoid-algebra", "-g", "Z2"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["commutative"], true);
    assert_eq!(v["associative"], true);
}

#[test]
fn errors_are_machine_readable() {
    let (v, code) = json(&["dw-count", "-g", "Z9", "--genus", "0", "--monodromy", "e,e"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "unstable");
    let (v, code) = json(&["dw-count", "-g", "nosuch", "--genus", "0", "--monodromy", "e"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "bad-input");
}

#[test]
fn enumerate_covers_matches_count() {
    let (v, code) = json(&[
        "enumerate-covers",
        "-g",
        "Z2",
        "--genus",
        "0",
        "--monodromy",
        "e,e,e",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 4);
}

#[test]
fn check_gluing_passes_for_s3() {
    let (v, code) = json(&["check-gluing", "-g", "S3"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn check_frobenius_generated_and_from_file() {
    let (v, code) = json(&["check-frobenius", "-g", "Z3", "--output", "/tmp/corolla_frob_out.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);

    // a perturbed algebra file must fail with exit 1
    let dw = corolla_core::dw::DWTheory::new(corolla_core::group::group_by_name("Z3").unwrap());
    let mut frob = corolla_core::frobenius::dw_frobenius(&dw).unwrap();
    let key = *frob.lambda3.keys().next().unwrap();
    let f = frob.lambda3.get_mut(&key).unwrap();
    let bumped = f.get(&[0, 0, 0]) + corolla_core::rational::rat_int(1);
    f.set(&[0, 0, 0], bumped);
    let path = std::env::temp_dir().join("corolla_bad_algebra.json");
    std::fs::write(
        &path,
        serde_json::to_string(&corolla_core::jsonio::frobenius_value(&frob)).unwrap(),
    )
    .unwrap();
    let (v, code) = json(&["check-frobenius", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn free_operad_counts() {
    let (v, code) = json(&["free-operad", "-g", "trivial", "--genus", "0", "-n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["classes"], 3);
    // explicit module file with the corolla supported
    let path = std::env::temp_dir().join("corolla_module.json");
    std::fs::write(&path, r#"{"kind": "point", "supports": [[0,3],[0,4]]}"#).unwrap();
    let (v, code) = json(&[
        "free-operad",
        "-g",
        "trivial",
        "--genus",
        "0",
        "-n",
        "4",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["classes"], 4);
    // a bound below the needed edge count is refused
    let (v, code) = json(&[
        "free-operad", "-g", "trivial", "--genus", "0", "-n", "4", "--bound", "0",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "incomplete-bound");
}

#[test]
fn check_monad_laws_exits_zero() {
    let (v, code) = json(&["check-monad-laws", "-g", "Z2", "--genus", "1", "-n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn acceptance_output_byte_identical_across_workers() {
    let (out1, code1) = corolla(&["acceptance", "--workers", "1"]);
    let (out2, code2) = corolla(&["acceptance", "--workers", "2"]);
    let (out8, code8) = corolla(&["acceptance", "--workers", "8"]);
    assert_eq!((code1, code2, code8), (0, 0, 0));
    assert_eq!(out1, out2, "workers 1 vs 2 differ");
    assert_eq!(out1, out8, "workers 1 vs 8 differ");
    let v: serde_json::Value = serde_json::from_str(&out1).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
}
