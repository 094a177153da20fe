use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn mczr(args: &[&Path], extra: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mczr"));
    cmd.args(extra.iter().take(1)).args(args).args(extra.iter().skip(1));
    cmd.env_remove("MCZR_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn prism_circuit(dir: &TempDir) -> PathBuf {
    let edges = [[1, 2], [1, 3], [2, 3], [1, 4], [4, 5], [5, 6], [2, 5], [3, 6], [4, 6]];
    let gates: Vec<Value> = edges
        .iter()
        .map(|e| json!({"qubits": e, "theta": 0.5}))
        .collect();
    write(dir, "prism.json", &json!({"schema_version": "1", "n": 6, "gates": gates}))
}

fn three_qubit_diagonal(dir: &TempDir) -> PathBuf {
    // exp(i(0.7 x1 + 1.9 x2 x3 + 2.6 x1 x2 x3)) on |x1 x2 x3>
    let alpha: Vec<f64> = (0..8u32)
        .map(|k| {
            let (x1, x2, x3) = ((k >> 2) & 1, (k >> 1) & 1, k & 1);
            0.7 * f64::from(x1) + 1.9 * f64::from(x2 * x3) + 2.6 * f64::from(x1 * x2 * x3)
        })
        .collect();
    write(dir, "three_qubit.json", &json!({"schema_version": "1", "n": 3, "alpha": alpha}))
}

#[test]
fn synth_then_verify_round_trips() {
    let dir = TempDir::new().unwrap();
    let alpha = three_qubit_diagonal(&dir);
    let circuit = dir.path().join("out.json");
    for solver in ["--fast", "--naive"] {
        let out = mczr(
            &[&alpha],
            &["synth", solver, "--iter", "3", "-o", circuit.to_str().unwrap()],
            &[],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let doc: Value = serde_json::from_str(&fs::read_to_string(&circuit).unwrap()).unwrap();
        assert_eq!(doc["gates"].as_array().unwrap().len(), 3);

        let out = mczr(&[&alpha, &circuit], &["verify"], &[]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).trim(), "equal");
    }
}

#[test]
fn verify_reports_mismatch_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &json!({"schema_version": "1", "n": 1, "alpha": [0.0, 1.0]}));
    let b = write(&dir, "b.json", &json!({"schema_version": "1", "n": 1, "alpha": [0.0, 1.001]}));
    let out = mczr(&[&a, &b], &["verify"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("mismatch"));
    let out = mczr(&[&a, &b], &["verify", "--tol", "0.01"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn optimize_and_lower_bound_on_prism() {
    let dir = TempDir::new().unwrap();
    let circuit = prism_circuit(&dir);

    let out = mczr(&[&circuit], &["lb"], &[]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3");

    let out = mczr(&[&circuit], &["optimize", "--iter", "2"], &[]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["layers"].as_array().unwrap().len(), 3);
    assert_eq!(doc["gates"].as_array().unwrap().len(), 9);

    let optimized = write(&dir, "opt.json", &doc);
    let out = mczr(&[&circuit, &optimized], &["verify"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn simulate_emits_phase_vector() {
    let dir = TempDir::new().unwrap();
    let circuit = write(
        &dir,
        "c.json",
        &json!({"schema_version": "1", "n": 2, "gates": [{"qubits": [1, 2], "theta": 1.5}]}),
    );
    let out = mczr(&[&circuit], &["simulate"], &[]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["alpha"], json!([0.0, 0.0, 0.0, 1.5]));
}

#[test]
fn errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    let out = mczr(&[&missing], &["lb"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let bad = write(&dir, "bad.json", &json!({"schema_version": "1", "n": 2, "gates": [{"qubits": [3], "theta": 1.0}]}));
    assert_eq!(mczr(&[&bad], &["lb"], &[]).status.code(), Some(1));

    let out = mczr(&[], &["no-such-command"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

fn without_wall_time(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut cols: Vec<&str> = l.split(',').collect();
            cols.remove(7);
            cols.join(",")
        })
        .collect()
}

#[test]
fn bench_seed_comes_from_config_or_environment() {
    let dir = TempDir::new().unwrap();
    let seeded = write(&dir, "q1.json", &json!({"sizes": [6, 8], "graphs": 5, "iters": [1, 2], "seed": 41}));
    let unseeded = write(&dir, "q2.json", &json!({"sizes": [6, 8], "graphs": 5, "iters": [1, 2]}));

    let a = mczr(&[&seeded], &["bench-qaoa"], &[]);
    let b = mczr(&[&unseeded], &["bench-qaoa"], &[("MCZR_SEED", "41")]);
    let c = mczr(&[&unseeded], &["bench-qaoa"], &[]);
    assert!(a.status.success() && b.status.success() && c.status.success());
    assert_eq!(without_wall_time(&stdout(&a)), without_wall_time(&stdout(&b)));
    assert_ne!(without_wall_time(&stdout(&a)), without_wall_time(&stdout(&c)));
    assert_eq!(stdout(&a).lines().count(), 1 + 2 * 5 * 2);

    let out = mczr(&[&unseeded], &["bench-qaoa"], &[("MCZR_SEED", "abc")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_hermitian_writes_csv_and_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "h.json", &json!({"sizes": [2, 5], "samples": 4, "seed": 3}));
    let csv = dir.path().join("h.csv");
    let out = mczr(&[&cfg], &["bench-hermitian", "--summary", "-o", csv.to_str().unwrap()], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,instance_id,strategy,depth_before,depth_after,gate_count,lower_bound,wall_time,rng_seed"
    );
    // 8 enumerated operators at n=2 plus 4 samples at n=5, four strategies each
    assert_eq!(text.lines().count(), 1 + (8 + 4) * 4);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 4);
}
