use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastonet"))
        .args(args)
        .current_dir(golden(""))
        .env_remove("ELASTONET_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn golden_exit_codes() {
    let cases: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(golden("cases.json")).unwrap()).unwrap();
    assert!(cases.len() >= 6);
    for case in cases {
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let out = run(&args);
        assert_eq!(code(&out) as i64, case["exit"].as_i64().unwrap(), "{}: {}", case["name"], String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn single_spring_sweep_is_constant() {
    let out = run(&["respond", "single_spring.json", "--count", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let want = [[1.0, 0.0, -1.0, 0.0], [0.0; 4], [-1.0, 0.0, 1.0, 0.0], [0.0; 4]];
    for e in entries {
        let (re, _) = pair(&e["lambda"]);
        assert_eq!(re, 0.0);
        for (i, row) in e["W"].as_array().unwrap().iter().enumerate() {
            for (j, z) in row.as_array().unwrap().iter().enumerate() {
                assert_eq!(pair(z), (want[i][j], 0.0));
            }
        }
    }
    assert_eq!(entries[0]["W"], entries[2]["W"]);
}

#[test]
fn chain_static_is_series_spring() {
    let out = run(&["respond", "chain.json", "--start", "0", "--stop", "0", "--count", "1", "--scale", "linear"]);
    assert_eq!(code(&out), 0);
    let w = &json(&out)[0]["W"];
    assert!((pair(&w[0][0]).0 - 0.5).abs() < 1e-14);
    assert!((pair(&w[0][2]).0 + 0.5).abs() < 1e-14);
    assert!(pair(&w[1][1]).0.abs() < 1e-14);
}

#[test]
fn complex_list_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("l.json");
    std::fs::write(&list, "[[0.0, 1.0], [0.5, 0.5]]").unwrap();
    let out = run(&["respond", "mass_on_spring.json", "--axis", "complex-list", "--lambdas", list.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v[0]["at_resonance"], true);
    assert!(v[0].get("W").is_none());
    // 1 − 1/(1 + λ²) with λ² = i/2 gives 1 − (1 − i/2)/1.25
    let (re, im) = pair(&v[1]["W"][0][0]);
    assert!((re - 0.2).abs() < 1e-14 && (im - 0.4).abs() < 1e-14, "{re} {im}");
}

#[test]
fn unknown_field_names_path() {
    let out = run(&["respond", "unknown_field.json"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nodes[1].colour"), "{err}");
}

#[test]
fn characterize_reports_failures() {
    let out = run(&["characterize", "canonical_negative_sigma.json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["conditions"]["sigma_positive"]["pass"], false);

    let out = run(&["characterize", "canonical_nonpsd_static.json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["conditions"]["static_psd"]["pass"], false);
    assert_eq!(v["conditions"]["R_psd"]["pass"], true);
    assert_eq!(v["conditions"]["A_psd"]["pass"], true);
}

#[test]
fn characterize_network_and_extract_agree() {
    let out = run(&["characterize", "random_network.json", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    let again = run(&["characterize", "random_network.json", "--seed", "4"]);
    assert_eq!(out.stdout, again.stdout);

    let dir = tempfile::tempdir().unwrap();
    let cr = dir.path().join("c.json");
    assert_eq!(code(&run(&["extract", "random_network.json", "-o", cr.to_str().unwrap()])), 0);
    let out = run(&["characterize", cr.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cr).unwrap()).unwrap();
    for k in ["alpha", "beta", "A", "Mbb", "modes", "terminals"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}

#[test]
fn synthesize_outputs() {
    let out = run(&["synthesize", "canonical_zero.json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["network"]["components"].as_array().unwrap().len(), 0);

    let dir = tempfile::tempdir().unwrap();
    let cr = dir.path().join("c.json");
    run(&["extract", "random_network.json", "-o", cr.to_str().unwrap()]);
    let out = run(&["synthesize", cr.to_str().unwrap(), "--epsilon", "0.05", "--seed", "9"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verification"]["n_lambda_samples"], 50);
    assert!(v["verification"]["max_rel_error"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["network"]["epsilon_hull"], 0.05);
    let kinds: Vec<&str> = v["network"]["components"].as_array().unwrap().iter().map(|c| c["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"rank_one_gadget"));

    assert_eq!(code(&run(&["synthesize", "canonical_nonpsd_static.json"])), 5);
}

#[test]
fn forbidden_points_respected() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.json");
    std::fs::write(&pts, "[[0.0, 0.01], [0.01, 0.0], [0.0, -0.01]]").unwrap();
    let out = run(&["synthesize", "canonical_single_mode.json", "--forbidden", pts.to_str().unwrap(), "--min-clearance", "0.005"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let forbidden = [(0.0, 0.01), (0.01, 0.0), (0.0, -0.01)];
    for comp in v["network"]["components"].as_array().unwrap() {
        for n in comp["nodes"].as_array().unwrap().iter().filter(|n| n["terminal"] == false) {
            let (x, y) = pair(&n["position"]);
            for (fx, fy) in forbidden {
                assert!(((x - fx).powi(2) + (y - fy).powi(2)).sqrt() >= 0.005);
            }
        }
    }
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,sigma,piece_label"));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn loci_csv() {
    let out = run(&["loci", "--alpha", "0", "--beta", "2", "--points", "100"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 100);
    let mut labels = std::collections::BTreeSet::new();
    for r in &rows {
        let (re, im): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        if im != 0.0 {
            assert!((re + 1.0).abs() < 1e-12);
        } else {
            assert!((-2.0..0.0).contains(&re));
        }
        labels.insert(r[3].clone());
    }
    assert!(labels.contains("segment") && labels.contains("line"));

    let rows = csv_rows(&run(&["loci", "--alpha", "1", "--beta", "2", "--points", "100"]));
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() == 0.0));

    let out = run(&["loci", "--alpha", "1", "--beta", "0", "--points", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_rows(&out).len(), 4);

    assert_eq!(code(&run(&["loci", "--alpha", "1", "--beta", "-0.5"])), 2);
    assert_eq!(code(&run(&["loci", "--alpha", "1", "--beta", "0", "--points", "1"])), 2);
}

#[test]
fn roundtrip_deterministic_and_seed_env() {
    let a = run(&["roundtrip", "random_network.json", "--seed", "11"]);
    let b = run(&["roundtrip", "random_network.json", "--seed", "11", "--jobs", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 11);
    assert!(v["verification"]["max_rel_error"].as_f64().unwrap() <= 1e-8);

    let env = Command::new(env!("CARGO_BIN_EXE_elastonet"))
        .args(["roundtrip", "random_network.json", "--seed", "3"])
        .current_dir(golden(""))
        .env("ELASTONET_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_elastonet"))
        .args(["roundtrip", "random_network.json"])
        .current_dir(golden(""))
        .env("ELASTONET_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn parallel_sweep_keeps_order() {
    let serial = run(&["respond", "random_network.json", "--count", "25"]);
    let parallel = run(&["respond", "random_network.json", "--count", "25", "--jobs", "4"]);
    assert_eq!(code(&serial), 0);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn generate_is_seeded() {
    let a = run(&["generate", "--dim", "3", "--seed", "5"]);
    let b = run(&["generate", "--dim", "3", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["dimension"], 3);
    assert_eq!(code(&run(&["generate", "--alpha", "-1", "--beta", "0"])), 2);
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&run(&["respond", "single_spring.json", "--count", "0"])), 2);
    assert_eq!(code(&run(&["respond", "single_spring.json", "--scale", "log", "--start", "0"])), 2);
    assert_eq!(code(&run(&["characterize", "missing.json"])), 2);
    assert_eq!(code(&run(&["characterize", "chain.json", "--tol", "-1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}
