// Copyright 2026 The memdepth Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::f64::consts::FRAC_PI_4;
use std::process::{Command, Output};

use memdepth_core::linalg::haar_unitary;
use memdepth_core::Matrix;
use serde_json::Value;

fn memdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memdepth")).args(args).output().expect("binary runs")
}

/// Runs with `--json -` and returns the exit code and the parsed report.
fn report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let out = memdepth(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), doc)
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn write_json(dir: &tempfile::TempDir, name: &str, v: &impl serde::Serialize) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decompose_presets() {
    let (code, doc) = report(&["decompose", "--input", "swap"]);
    assert_eq!(code, 0);
    for a in floats(&doc["result"]["decomposition"]["angles"]["alpha"]) {
        assert!((a - FRAC_PI_4).abs() < 1e-10);
    }
    let (_, doc) = report(&["decompose", "--input", "identity"]);
    assert!(floats(&doc["result"]["decomposition"]["angles"]["alpha"]).iter().all(|a| a.abs() < 1e-12));
    assert_eq!(doc["tool"], "memdepth");
    assert_eq!(doc["tolerances"]["tol"], 1e-9);
}

#[test]
fn decompose_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let u: Matrix = haar_unitary(4, 77);
    let path = write_json(&dir, "u.json", &u);
    let (code, doc) = report(&["decompose", "--input", &path]);
    assert_eq!(code, 0);
    assert!(doc["result"]["residual"].as_f64().unwrap() < 1e-9);
    let wrapped = write_json(&dir, "w.json", &serde_json::json!({ "matrix": u }));
    let (_, again) = report(&["decompose", "--input", &wrapped]);
    assert_eq!(doc["unitary"]["fingerprint"], again["unitary"]["fingerprint"]);
}

#[test]
fn canonical_parameters_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = serde_json::json!({ "alpha": [FRAC_PI_4, FRAC_PI_4, 0.2] });
    let (code, doc) = report(&["classify", "--input", &write_json(&dir, "c.json", &spec)]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["analytic"]["verdict"], "Two");
}

#[test]
fn invalid_inputs_exit_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows = vec![vec![[0.0, 0.0]; 4]; 4];
    rows[0][0] = [2.0, 0.0];
    let path = write_json(&dir, "bad.json", &rows);
    for args in [
        vec!["decompose", "--input", path.as_str()],
        vec!["classify", "--input", "toffoli"],
        vec!["decompose"],
        vec!["simulate", "--input", "swap", "--inputs", "1,1,0"],
        vec!["verify-reset", "--input", "swap", "--reset-length", "3"],
    ] {
        let mut all = args.clone();
        all.extend(["--json", "-"]);
        let out = memdepth(&all);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn classify_presets() {
    let (code, doc) = report(&["classify", "--input", "swap"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["analytic"]["verdict"], "One");
    assert_eq!(doc["result"]["agree"], true);

    let (code, doc) = report(&["classify", "--input", "cnot"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["analytic"]["verdict"], "Infinite");
    assert_eq!(doc["result"]["numeric"]["status"]["ExceedsBound"], 4);

    let (_, doc) = report(&["classify", "--input", "u_alpha_z=pi/8"]);
    assert_eq!(doc["result"]["analytic"]["verdict"], "Two");
    assert_eq!(doc["result"]["numeric"]["status"]["DepthIs"], 2);

    let (_, doc) = report(&["classify", "--input", "swap", "--mode", "numeric", "--n-max", "2"]);
    assert!(doc["result"].get("analytic").is_none());
    assert_eq!(doc["result"]["numeric"]["residuals"].as_array().unwrap().len(), 3);
}

#[test]
fn simulate_swap_delays_inputs() {
    let (code, doc) = report(&["simulate", "--input", "swap", "--memory", "0,0,0.5", "--inputs", "1,0,0;0,0.3,0"]);
    assert_eq!(code, 0);
    let outs = doc["result"]["outputs"].as_array().unwrap();
    assert_eq!(floats(&outs[0]), vec![0.0, 0.0, 0.5]);
    assert_eq!(floats(&outs[1]), vec![1.0, 0.0, 0.0]);
}

#[test]
fn simulate_without_inputs_echoes_memory() {
    let (_, doc) = report(&["simulate", "--input", "cnot", "--memory", "0.1,0.2,0.3", "--inputs", ""]);
    assert!(doc["result"]["outputs"].as_array().unwrap().is_empty());
    let m = doc["result"]["memory_blochs"].as_array().unwrap();
    assert_eq!(m.len(), 1);
    assert!(floats(&m[0]).iter().zip([0.1, 0.2, 0.3]).all(|(a, b)| (a - b).abs() < 1e-15));
}

#[test]
fn simulate_alpha_z_forgets_initial_memory() {
    let (_, doc) = report(&["simulate", "--input", "u_alpha_z=0.3", "--memory", "0.3,0.2,0.5", "--count", "5", "--seed", "11"]);
    let re = &doc["result"]["resimulation"];
    assert!(re["memory_agrees_from"].as_u64().unwrap() <= 3);
    assert!(floats(&re["memory_differences"])[2..].iter().all(|&d| d < 1e-10));
    let (_, doc) = report(&["simulate", "--input", "cnot", "--memory", "0,0,1", "--count", "5"]);
    assert!(doc["result"]["resimulation"]["memory_agrees_from"].is_null());
}

#[test]
fn verify_reset_outcomes() {
    let (code, doc) = report(&["verify-reset", "--input", "u_alpha_z=0.3", "--omega", "bell"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["passed"], true);
    let (code, _) = report(&["verify-reset", "--input", "swap", "--reset-length", "1", "--seed", "5"]);
    assert_eq!(code, 0);
    let (code, doc) = report(&["verify-reset", "--input", "cnot"]);
    assert_eq!(code, 4);
    assert!(doc["result"]["factorization_residual"].as_f64().unwrap() > 1e-6);
}

#[test]
fn classical_survey_table() {
    let (code, doc) = report(&["classical-survey"]);
    assert_eq!(code, 0);
    let rows = doc["result"]["permutations"].as_array().unwrap();
    assert_eq!(rows.len(), 24);
    let identity = rows.iter().find(|r| floats(&r["permutation"]["mapping"]) == vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    assert_eq!(identity["depth"], "0");
    let hist = doc["result"]["histogram"].as_object().unwrap();
    assert_eq!(hist.values().map(|v| v.as_u64().unwrap()).sum::<u64>(), 24);
    assert!(hist.keys().all(|k| ["0", "1", "exceeds 4"].contains(&k.as_str())));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["classify", "--input", "u_alpha_z=0.2"],
        vec!["simulate", "--input", "cnot", "--count", "4", "--seed", "9"],
        vec!["verify-reset", "--input", "u_alpha_z=0.2", "--omega", "random", "--seed", "3"],
    ] {
        let mut all = args.clone();
        all.extend(["--json", "-"]);
        assert_eq!(memdepth(&all).stdout, memdepth(&all).stdout, "{args:?}");
    }
}

#[test]
fn json_to_file_keeps_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = memdepth(&["classify", "--input", "swap", "--json", path.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("agree"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["command"]["name"], "classify");
}
