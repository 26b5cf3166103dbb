use std::process::{Command, Output};

fn itolog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itolog")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn qsh_prints_the_product() {
    let o = itolog(&["qsh", "1.2", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "I_{1[2,3]} + I_{[1,3]2} + I_{123} + I_{132} + I_{312}");

    let o = itolog(&["--json", "qsh", "1.2", "3.4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 13);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let o = itolog(&["qsh", "[1,"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(code(&itolog(&["verify", "nonsense"])), 2);
    assert_eq!(code(&itolog(&["surj-log", "--grade", "7"])), 2);
}

#[test]
fn randomized_commands_need_a_seed() {
    assert_eq!(code(&itolog(&["verify", "pathwise"])), 2);
    assert_eq!(code(&itolog(&["simulate", "--driver", "brownian"])), 2);
    assert_eq!(code(&itolog(&["flow-compare", "--paths", "2"])), 2);
    // a purely deterministic path needs none
    assert_eq!(code(&itolog(&["simulate", "--driver", "drift", "--steps", "4"])), 0);
}

#[test]
fn continuous_log_flow_third_order() {
    let o = itolog(&["logflow", "--order", "3", "--continuous"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "V_i I_i");
    assert_eq!(lines[1], "V_i V_j (1/2 I_{ij} - 1/2 I_{ji} - 1/2 I_{[i,j]})");
    for t in ["1/3 I_{ijk}", "1/6 I_{j[i,k]}", "1/3 I_{k[i,j]}", "1/3 I_{[j,k]i}"] {
        assert!(lines[2].contains(t), "{t} missing from {}", lines[2]);
    }
}

#[test]
fn logflow_json_lists_templates() {
    let o = itolog(&["--json", "logflow", "--order", "3", "--continuous"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms = v.as_array().unwrap();
    assert!(terms.iter().any(|t| t["partition"] == serde_json::json!([[2], [1, 3]])
        && t["coeff"] == serde_json::json!({"num": "-1", "den": "6"})));
}

#[test]
fn exact_suites_pass_and_report() {
    let o = itolog(&["verify", "theorem", "--grade", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let o = itolog(&["matrix-log", "--dim", "2", "--order", "2", "--check"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("exp(log) = Ito-Taylor through order 2: true"));
}

#[test]
fn deterministic_json_is_byte_identical() {
    let args = ["--json", "--deterministic", "--seed", "3", "verify", "pathwise", "--steps", "512", "--paths", "10"];
    let a = itolog(&args);
    let b = itolog(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["pass"] == true && r["seed"] == 3));
}

#[test]
fn simulate_writes_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("paths.bin");
    let o = itolog(&[
        "--seed", "1", "--out", file.to_str().unwrap(),
        "simulate", "--driver", "brownian", "--driver", "poisson:3", "--steps", "64",
    ]);
    assert_eq!(code(&o), 0);
    let bytes = std::fs::read(&file).unwrap();
    assert_eq!(&bytes[..8], b"ITOPATH1");
    assert_eq!(bytes.len(), 24 + 65 * 3 * 8);

    let csv = itolog(&["--seed", "1", "simulate", "--driver", "brownian", "--steps", "4"]);
    assert!(stdout(&csv).starts_with("t,"));
    assert_eq!(stdout(&csv).lines().count(), 6);
}

#[test]
fn flow_compare_from_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("problem.json");
    let problem = serde_json::json!({
        "dim": 2,
        "drivers": {"kind": "linear", "a": [[0.0, 1.0], [-1.0, 0.0]], "b": [[1.0, 0.0], [0.0, -1.0]]},
        "horizon": 0.1,
        "steps": 256
    });
    std::fs::write(&file, problem.to_string()).unwrap();
    let o = itolog(&[
        "--json", "--seed", "5", "flow-compare", "--problem", file.to_str().unwrap(), "--paths", "20", "--order", "2",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["orders"].as_array().unwrap().len(), 2);

    std::fs::write(&file, r#"{"dim": 2}"#).unwrap();
    let bad = itolog(&["--seed", "5", "flow-compare", "--problem", file.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
}
