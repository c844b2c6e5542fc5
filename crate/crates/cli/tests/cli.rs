use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph"))
        .args(args)
        .env_remove("QGRAPH_TOL")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = qgraph(args);
    let code = out.status.code().expect("exit code");
    let text = String::from_utf8(out.stdout).unwrap();
    let json = if text.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"))
    };
    (code, json)
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

fn save(dir: &tempfile::TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.display().to_string()
}

#[test]
fn connectedness_fixtures() {
    let (code, r) = run(&["connectedness", &f("hamming_cube_2.json")]);
    assert_eq!((code, r["result"]["verdict"].as_str()), (0, Some("connected")));

    let (code, r) = run(&["connectedness", &f("scalars_2.json")]);
    assert_eq!((code, r["result"]["verdict"].as_str()), (1, Some("disconnected")));
    assert!(r["result"]["witness"].is_array());

    let (code, r) = run(&["connectedness", &f("p3_lifted.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["stabilization_power"], 2);
}

#[test]
fn k_bounds_fixtures() {
    for (file, k) in [("k4_lifted.json", 3), ("p3_lifted.json", 1), ("maximal_3.json", 2)] {
        let (code, r) = run(&["k-bounds", &f(file), "--restarts", "40"]);
        assert_eq!(code, 0, "{file}");
        assert_eq!((r["result"]["lower"].as_u64(), r["result"]["upper"].as_u64()), (Some(k), Some(k)), "{file}");
    }
}

#[test]
fn lgp_representation_raises_the_lower_bound() {
    let (code, r) = run(&["k-bounds", &f("c5_lifted.json"), "--lgp-rep", &f("c5_umbrella.json"), "--restarts", "40"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["lgp_bound"], 2);
    assert_eq!(r["result"]["lower"], 2);
    assert_eq!(r["result"]["conditional_lower"], true);

    // The depolarizing map is no representation of S_{P_3}: warned, omitted.
    let out = qgraph(&["k-bounds", &f("p3_lifted.json"), "--lgp-rep", &f("depolarizing_3.json"), "--restarts", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["result"].get("lgp_bound").is_none());
    assert!(String::from_utf8_lossy(&out.stderr).contains("LGP bound omitted"));
}

#[test]
fn lift_and_confusability() {
    let (code, r) = run(&["lift", &f("p3.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["kind"], "quantum_graph");
    assert_eq!(r["payload"]["generators"].as_array().unwrap().len(), 7);

    let (code, r) = run(&["confusability", &f("p3_lifted.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["edges"], serde_json::json!([[1, 2], [2, 3]]));

    let (code, r) = run(&["confusability", &f("scalars_2.json"), "--haar"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["edges"], serde_json::json!([]));
}

#[test]
fn channel_graph_of_dephasing() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let (code, r) = run(&["channel-graph", &f("dephasing_2.json"), "--graph-out", graph.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verdict"], "disconnected");
    assert_eq!(r["result"]["dim"], 2);
    let (code, _) = run(&["connectedness", graph.to_str().unwrap()]);
    assert_eq!(code, 1);

    let (_, r) = run(&["channel-graph", &f("depolarizing_3.json")]);
    assert_eq!(r["result"]["dim"], 9);
}

#[test]
fn tree_packing_verdicts() {
    let (code, r) = run(&["tree-packing", &f("p3.json"), &f("p3_split.json")]);
    assert_eq!((code, r["result"]["sum"].as_u64()), (0, Some(2)));

    let dir = tempfile::tempdir().unwrap();
    let split = serde_json::json!({"kind": "partition", "payload": {"n": 4, "blocks": [[1, 2], [3, 4]]}});
    let p = save(&dir, "split.json", &split);
    let (code, r) = run(&["tree-packing", &f("two_edges.json"), &p]);
    assert_eq!((code, r["result"]["sum"].as_u64()), (1, Some(0)));
}

#[test]
fn orthogonal_representation_checks() {
    let (code, r) = run(&["check-orth-rep", &f("c5_umbrella.json"), &f("c5.json")]);
    assert_eq!((code, r["result"]["verdict"].as_str()), (0, Some("pass_sampled")));
    assert!(r["result"]["pairs_tested"].as_u64().unwrap() > 0);

    let (code, r) = run(&["check-orth-rep", &f("depolarizing_3.json"), &f("p3.json"), "--samples", "20"]);
    assert_eq!((code, r["result"]["verdict"].as_str()), (1, Some("violated")));

    let (code, r) = run(&["check-orth-rep", &f("trace_3.json"), &f("maximal_3.json")]);
    assert_eq!((code, r["result"]["pairs_tested"].as_u64()), (0, Some(0)));

    let (code, r) = run(&["check-lgp", &f("trace_3.json"), &f("maximal_3.json")]);
    assert_eq!((code, r["result"]["verdict"].as_str()), (0, Some("pass_sampled")));
    let (code, _) = run(&["check-lgp", &f("c5_umbrella.json"), &f("c5.json")]);
    assert_eq!(code, 0);
}

#[test]
fn reports_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["connectedness", &f("scalars_2.json")],
        &["connectedness", &f("hamming_cube_2.json")],
        &["k-bounds", &f("c5_lifted.json"), "--restarts", "40"],
        &["channel-graph", &f("dephasing_2.json")],
        &["check-orth-rep", &f("depolarizing_3.json"), &f("p3.json"), "--samples", "10"],
        &["tree-packing", &f("p3.json"), &f("p3_ends.json")],
    ];
    for (i, args) in cases.iter().enumerate() {
        let (_, report) = run(args);
        let path = save(&dir, &format!("r{i}.json"), &report);
        let (code, v) = run(&["verify", &path]);
        assert_eq!((code, v["verified"].as_bool()), (0, Some(true)), "{args:?}: {v}");
    }

    let (_, mut report) = run(&["k-bounds", &f("p3_lifted.json"), "--restarts", "20"]);
    report["result"]["upper"] = 0.into();
    report["result"]["lower"] = 0.into();
    let path = save(&dir, "tampered.json", &report);
    let (code, v) = run(&["verify", &path]);
    assert_eq!((code, v["verified"].as_bool()), (1, Some(false)));

    let (_, mut report) = run(&["connectedness", &f("p3_lifted.json")]);
    report["result"]["verdict"] = "disconnected".into();
    let path = save(&dir, "tampered2.json", &report);
    assert_eq!(run(&["verify", &path]).0, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["k-bounds", &f("c5_lifted.json"), "--seed", "11", "--restarts", "30"];
    let a = qgraph(&args).stdout;
    let b = qgraph(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let g = ["generate", "channel", "--n", "3", "--d", "2", "--k", "2", "--seed", "5"];
    assert_eq!(qgraph(&g).stdout, qgraph(&g).stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.json");
    let (code, v) = run(&["connectedness", &f("p3_lifted.json"), "-o", p.to_str().unwrap()]);
    assert_eq!((code, v), (0, Value::Null));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(r["command"], "connectedness");
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = serde_json::json!({"kind": "quantum_graph", "payload": {"n": 2, "generators": [[[[1, 0], [0, 0]], [[0, 0]]]]}});
    let p = save(&dir, "ragged.json", &ragged);
    let out = qgraph(&["connectedness", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("payload.generators[0][1]"));

    let wrong = serde_json::json!({"kind": "kraus_map", "payload": {"in_dim": 2, "out_dim": 2, "kraus": []}});
    let p = save(&dir, "empty.json", &wrong);
    assert_eq!(qgraph(&["channel-graph", &p]).status.code(), Some(2));

    let notp = serde_json::json!({"kind": "kraus_map", "payload": {"in_dim": 1, "out_dim": 1, "kraus": [[[[0.5, 0]]]]}});
    let p = save(&dir, "half.json", &notp);
    assert_eq!(qgraph(&["channel-graph", &p]).status.code(), Some(2));

    assert_eq!(qgraph(&["connectedness", &f("p3.json")]).status.code(), Some(2));
    assert_eq!(qgraph(&["connectedness", "/nonexistent.json"]).status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_qgraph"))
        .args(["connectedness", &f("p3_lifted.json")])
        .env("QGRAPH_TOL", "1e-9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_from_environment_is_recorded() {
    let out = Command::new(env!("CARGO_BIN_EXE_qgraph"))
        .args(["connectedness", &f("p3_lifted.json")])
        .env("QGRAPH_TOL", "1e-10,1e-9")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["tolerance"]["residual_abs"], 1e-9);
}

#[test]
fn generated_instances_load() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |args: &[&str], name: &str| {
        let (code, v) = run(args);
        assert_eq!(code, 0, "{args:?}");
        save(&dir, name, &v)
    };
    let g = gen(&["generate", "graph", "--n", "6", "--p", "0.6", "--seed", "3"], "g.json");
    let s = gen(&["lift", &g], "s.json");
    assert_ne!(run(&["connectedness", &s]).0, 2);
    let b = gen(&["generate", "basis", "--n", "6"], "b.json");
    assert_eq!(run(&["confusability", &s, "--basis", &b]).0, 0);
    let sys = gen(&["generate", "system", "--n", "4", "--gens", "1"], "sys.json");
    assert_eq!(run(&["connectedness", &sys]).0, 0);
    let ch = gen(&["generate", "channel", "--n", "4", "--d", "3", "--k", "2"], "ch.json");
    let (_, r) = run(&["channel-graph", &ch]);
    assert_eq!(r["result"]["verdict"], "connected");
    let cube = gen(&["generate", "cube", "--order", "3"], "cube.json");
    assert_eq!(run(&["connectedness", &cube]).0, 0);

    let rep = gen(&["generate", "orth-rep", "--graph", &f("c5.json")], "rep.json");
    assert_eq!(run(&["check-lgp", &rep, &f("c5.json")]).0, 0);
    assert_eq!(run(&["check-orth-rep", &rep, &f("c5.json"), "--samples", "40"]).0, 0);
}
