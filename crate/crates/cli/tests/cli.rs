//! The `qas` binary driven end to end on temporary directories.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qas_cli::{cmd_evaluate, cmd_search, CircuitFile};
use qas_core::export::parse_qasm2;
use qas_core::{fidelity, run_gates, InitKind, StateVector};

fn qas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qas")).args(args).env_remove("QAS_THREADS").output().unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name).display().to_string()
}

fn run_ok(args: &[&str]) -> String {
    let out = qas(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn qec_config_stops_early_with_a_good_encoder() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("qec422.toml");
    run_ok(&["search", "--config", s(&config), "--out", s(dir.path())]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("search_report.json")).unwrap()).unwrap();
    assert_eq!(report["stopped_early"], true);
    assert!(report["best_reward"].as_f64().unwrap() >= 0.99);
    let csv = std::fs::read_to_string(dir.path().join("reward_trace.csv")).unwrap();
    assert!(csv.starts_with("iteration,best_reward,stopped_early\n"));
    assert!(csv.trim_end().ends_with(",true"));
}

#[test]
fn zero_iterations_leave_an_empty_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "output_dir = \"res\"\n[task]\nvariant = \"qec_encoding422\"\n[pool]\ngates = [\"h\"]\ntopology = \"line\"\nlayers = 3\n[search]\niterations = 0\n",
    )
    .unwrap();
    run_ok(&["search", "--config", s(&config)]);
    let res = dir.path().join("res");
    assert_eq!(std::fs::read_to_string(res.join("reward_trace.csv")).unwrap(), "iteration,best_reward,stopped_early\n");
    assert!(!res.join("best_circuit.json").exists());
}

#[test]
fn same_seed_gives_byte_identical_traces() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("maxcut_unweighted7.toml");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_ok(&["search", "--config", s(&config), "--seed", "5", "--out", s(&a)]);
    run_ok(&["search", "--config", s(&config), "--seed", "5", "--out", s(&b)]);
    for name in ["reward_trace.csv", "search_report.json", "best_circuit.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn weighted_maxcut_workflow_finds_the_optimal_cut() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("maxcut_weighted5.toml");
    run_ok(&["search", "--config", s(&config), "--out", s(dir.path())]);
    let best = dir.path().join("best_circuit.json");
    run_ok(&["finetune", "--circuit", s(&best)]);

    let csv = std::fs::read_to_string(dir.path().join("loss_trace.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "step,loss");
    assert_eq!(rows.len(), 1 + 501);
    let final_loss: f64 = rows.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(final_loss <= -17.5, "{final_loss}");

    let tuned = dir.path().join("finetuned_circuit.json");
    run_ok(&["sample", "--circuit", s(&tuned), "--shots", "10000", "--seed", "1"]);
    let hist: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("histogram.json")).unwrap()).unwrap();
    let top1 = hist["top"][0]["bitstring"].as_str().unwrap();
    assert!(["00011", "11100"].contains(&top1), "{top1}");
    assert_eq!(hist["top"][0]["cut_value"].as_f64(), Some(18.0));
}

#[test]
fn zero_step_finetune_writes_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("vqls.toml");
    run_ok(&["search", "--config", s(&config), "--out", s(dir.path())]);
    let best = dir.path().join("best_circuit.json");
    run_ok(&["finetune", "--circuit", s(&best), "--steps", "0"]);
    let csv = std::fs::read_to_string(dir.path().join("loss_trace.csv")).unwrap();
    let stored = CircuitFile::load(&best).unwrap().file.loss;
    assert_eq!(csv, format!("step,loss\n0,{stored}\n"));
}

#[test]
fn circuit_file_alone_reproduces_the_reward() {
    let dir = tempfile::tempdir().unwrap();
    let summary = cmd_search(&configs().join("h2.toml"), Some(2), Some(dir.path())).unwrap();
    let best = summary.best_circuit.unwrap();
    let e = cmd_evaluate(&best).unwrap();
    assert!((e.reward - summary.report.best_reward.unwrap()).abs() <= 1e-9);
    assert!((e.reward - e.stored_reward).abs() <= 1e-9);
}

#[test]
fn config_errors_exit_2_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "[task]\nvariant = \"max_cut\"\ngraph = \"missing.json\"\n[pool]\ngates = [\"rot\"]\ntopology = \"line\"\nlayers = 4\n").unwrap();
    let out = qas(&["search", "--config", s(&config)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:3:"), "{err}");

    std::fs::write(&config, "[task]\nvariant = \"qec_encoding422\"\n[pool]\ngates = [\"h\"]\ntopology = \"ring\"\nlayers = 4\ncolour = 3\n").unwrap();
    let out = qas(&["search", "--config", s(&config)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.toml:7:"));
}

#[test]
fn inconsistent_parameter_checkpoint_is_rejected_before_search() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    qas_core::SharedParameters::zeros(3, 5, 3).save_json(&params).unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        format!(
            "initial_parameters = \"params.json\"\n[task]\nvariant = \"max_cut\"\ngraph = \"{}\"\n[pool]\ngates = [\"rot\"]\ntopology = \"line\"\nlayers = 4\n",
            fixture("maxcut_weighted5.json")
        ),
    )
    .unwrap();
    let out = qas(&["search", "--config", s(&config)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run.toml:1:"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn malformed_circuit_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("c.json");
    std::fs::write(&circuit, "{\"task\": 3}").unwrap();
    for cmd in ["finetune", "sample", "export", "evaluate"] {
        assert_eq!(qas(&[cmd, "--circuit", s(&circuit)]).status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn oracle_reports_the_weighted_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("maxcut_weighted5.toml");
    run_ok(&["oracle", "--config", s(&config), "--out", s(dir.path())]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("oracle.json")).unwrap()).unwrap();
    assert_eq!(v["max_cut"].as_f64(), Some(18.0));
    assert_eq!(v["argmax"], serde_json::json!(["00011", "11100"]));

    run_ok(&["oracle", "--config", s(&configs().join("h2.toml")), "--out", s(dir.path())]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("oracle.json")).unwrap()).unwrap();
    assert!((v["ground_energy"].as_f64().unwrap() + 1.136).abs() < 5e-3);
}

#[test]
fn identity_system_oracle_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.json"), "{\"num_qubits\": 3, \"terms\": [{\"coeff\": 1.0, \"pauli\": \"III\"}]}")
        .unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "[task]\nvariant = \"vqls\"\n[task.vqls]\nmatrix = \"a.json\"\n[pool]\ngates = [\"ry\"]\ntopology = \"line\"\nlayers = 2\n",
    )
    .unwrap();
    run_ok(&["oracle", "--config", s(&config), "--out", s(dir.path())]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("oracle.json")).unwrap()).unwrap();
    let probs = v["probabilities"].as_array().unwrap();
    assert_eq!(probs.len(), 8);
    assert!(probs.iter().all(|p| (p.as_f64().unwrap() - 0.125).abs() < 1e-12));
}

#[test]
fn oracle_size_cap_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let word = format!("Z{}", "I".repeat(12));
    std::fs::write(
        dir.path().join("h.json"),
        format!("{{\"num_qubits\": 13, \"terms\": [{{\"coeff\": 1.0, \"pauli\": \"{word}\"}}]}}"),
    )
    .unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "[task]\nvariant = \"vqe_chemistry\"\nhamiltonian = \"h.json\"\n[pool]\ngates = [\"ry\"]\ntopology = \"line\"\nlayers = 2\n",
    )
    .unwrap();
    let out = qas(&["oracle", "--config", s(&config), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn qasm_export_round_trips_through_the_simulator() {
    let dir = tempfile::tempdir().unwrap();
    for (config, init) in [("qec422.toml", InitKind::Zeros), ("maxcut_weighted5.toml", InitKind::Plus)] {
        let out = dir.path().join(config);
        run_ok(&["search", "--config", s(&configs().join(config)), "--out", s(&out)]);
        let best = out.join("best_circuit.json");
        run_ok(&["export", "--circuit", s(&best), "--format", "qasm2"]);
        let text = std::fs::read_to_string(out.join("circuit.qasm")).unwrap();
        assert_eq!(text.lines().next(), Some("OPENQASM 2.0;"));

        let loaded = CircuitFile::load(&best).unwrap();
        let expected = loaded.output_state().unwrap();
        let (n, gates) = parse_qasm2(&text).unwrap();
        let replayed = run_gates(&StateVector::new(n, InitKind::Zeros).unwrap(), &gates).unwrap();
        assert!((fidelity(&expected, &replayed).unwrap() - 1.0).abs() < 1e-9, "{config}");
        assert_eq!(loaded.task.initial_state, init);

        run_ok(&["export", "--circuit", s(&best), "--format", "text"]);
        let listing = std::fs::read_to_string(out.join("circuit.txt")).unwrap();
        assert!(!listing.contains("Placeholder"));
    }
}

#[test]
fn bad_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_qas"))
        .args(["oracle", "--config", s(&configs().join("h2.toml"))])
        .env("QAS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
