use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chromabound"));
    cmd.env_remove("CHROMABOUND_CACHE").env("RUST_LOG", "error");
    cmd
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/chromabound.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Parses stdout as JSON and checks it against the shipped schema.
fn json_output(o: &Output, command: &str) -> Value {
    let v: Value = serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)));
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{command}: {errors:?}");
    assert_eq!(v["command"], command);
    v
}

#[test]
fn params_c5() {
    let o = run(&["params", "--gen", "cycle:5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "params");
    assert!((v["params"]["chi_f"]["value"].as_f64().unwrap() - 2.5).abs() < 1e-7);
    assert_eq!(v["params"]["chi_f"]["exact"], "5/2");
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    let text = run(&["params", "--gen", "cycle:5"]);
    assert!(stdout(&text).contains("= 5/2"));
}

#[test]
fn params_with_levels_validates() {
    let o = run(&["params", "--gen", "complete:3", "-N", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "params");
    assert_eq!(v["params"]["level1_bound_c2"]["verdict"], "CertifiedNoColouring");
}

#[test]
fn params_csv_has_header() {
    let o = run(&["params", "--gen", "complete:4", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("graph,param,value,gap,status,seconds"));
    assert!(text.lines().any(|l| l.starts_with("K4,chi,4,")));
}

#[test]
fn params_usage_and_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.g6");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(code(&run(&["params", "--graph6", empty.to_str().unwrap()])), 64);
    assert_eq!(code(&run(&["params", "--graph6", dir.path().join("absent").to_str().unwrap()])), 66);
    assert_eq!(code(&run(&["params"])), 64);
    assert_eq!(code(&run(&["params", "--gen", "cycle:5", "--graph6", "x"])), 64);
    assert_eq!(code(&run(&["params", "--gen", "wheel:5"])), 64);
    assert_eq!(code(&run(&["params", "--gen", "cycle:5", "--threads", "0"])), 64);
    assert_eq!(code(&run(&["params", "--gen", "cycle:5", "--clique-cap", "0"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn params_from_dimacs_and_graph6() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("c5.col");
    std::fs::write(&d, "c pentagon\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n").unwrap();
    let g = dir.path().join("c5.g6");
    std::fs::write(&g, "Dhc\n").unwrap();
    for args in [["--dimacs", d.to_str().unwrap()], ["--graph6", g.to_str().unwrap()]] {
        let o = run(&["params", args[0], args[1], "--format", "json"]);
        assert_eq!(code(&o), 0);
        let v = json_output(&o, "params");
        assert!((v["params"]["xi_sdp"]["value"].as_f64().unwrap() - 2.5).abs() < 1e-5);
    }
}

#[test]
fn qc_level_consistent_and_certified() {
    let o = run(&["qc-level", "--gen", "complete:3", "-c", "3", "-N", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "qc-level");
    assert!(v["min_value"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(v["verdict"], "ConsistentWithColouring");

    let o = run(&["qc-level", "--gen", "complete:3", "-c", "2", "-N", "2", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json_output(&o, "qc-level");
    assert!(v["lower_bound"].as_f64().unwrap() > 1e-6);

    let text = stdout(&run(&["qc-level", "--gen", "complete:3", "-c", "3", "-N", "1"]));
    assert!(text.contains("superset"));
}

#[test]
fn qc_level_rejects_level_zero() {
    assert_eq!(code(&run(&["qc-level", "--gen", "complete:3", "-c", "2", "-N", "0"])), 64);
    assert_eq!(code(&run(&["qc-level", "--gen", "complete:3", "-c", "2"])), 64);
}

#[test]
fn qc_level_cap_is_a_solver_failure() {
    let o = run(&["qc-level", "--gen", "cycle:5", "-c", "2", "-N", "2", "--max-solver-vars", "10", "--format", "json"]);
    assert_eq!(code(&o), 2);
    let v = json_output(&o, "qc-level");
    assert!(v["error"].as_str().unwrap().contains("cap"));
}

#[test]
fn verify_fixtures() {
    let c5 = fixture("c5_classical.json");
    let o = run(&["verify", c5.to_str().unwrap(), "--gen", "cycle:5", "-c", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "verify");
    assert_eq!(v["ok"], true);

    let bad = fixture("c5_perturbed.json");
    let o = run(&["verify", bad.to_str().unwrap(), "--gen", "cycle:5", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json_output(&o, "verify");
    let failed: Vec<&str> = v["failed_checks"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(failed.contains(&"idempotence at E[0,1]"), "{failed:?}");
    assert_eq!(v["operators"]["idempotence"]["at"], "E[0,1]");

    let k3 = fixture("k3_entangled.json");
    let o = run(&["verify", k3.to_str().unwrap(), "--gen", "complete:3", "--minimize", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "verify");
    assert_eq!(v["dim"], 9);
    assert_eq!(v["minimized_dim"], 3);
    assert_eq!(v["zero_products"]["all_zero"], true);
}

#[test]
fn verify_input_errors() {
    let c5 = fixture("c5_classical.json");
    assert_eq!(code(&run(&["verify", "/nonexistent/r.json", "--gen", "cycle:5"])), 66);
    assert_eq!(code(&run(&["verify", c5.to_str().unwrap(), "--gen", "cycle:7"])), 64);
    assert_eq!(code(&run(&["verify", c5.to_str().unwrap(), "--gen", "cycle:5", "-c", "4"])), 64);
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(code(&run(&["verify", junk.to_str().unwrap(), "--gen", "cycle:5"])), 64);
}

#[test]
fn export_sdpa_targets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xi.dat-s");
    let o = run(&["export-sdpa", "--gen", "cycle:5", "--target", "xi-sdp", "--solve", "-o", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "export-sdpa");
    assert!((v["embedded_value"].as_f64().unwrap() - 2.5).abs() < 1e-5);
    let text = std::fs::read_to_string(&path).unwrap();
    let prob = chromabound::solver::parse_sdpa_sparse(&text).unwrap();
    assert_eq!(prob.constraints.len(), v["constraints"].as_u64().unwrap() as usize);

    let o = run(&["export-sdpa", "--gen", "complete:3", "--target", "qc-level", "-c", "3", "-N", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "export-sdpa");
    assert!(v["sdpa"].as_str().unwrap().contains("F0 = -C"));

    let o = run(&["export-sdpa", "--gen", "cycle:5", "--target", "theta-plus"]);
    assert_eq!(code(&o), 0);
    assert!(chromabound::solver::parse_sdpa_sparse(&stdout(&o)).is_ok());

    assert_eq!(code(&run(&["export-sdpa", "--gen", "cycle:5", "--target", "lovasz"])), 64);
    assert_eq!(code(&run(&["export-sdpa", "--gen", "cycle:5", "--target", "qc-level"])), 64);
    assert_eq!(code(&run(&["export-sdpa", "--gen", "cycle:5", "--target", "xi-sdp", "-c", "3"])), 64);
}

#[test]
fn sweep_single_graph_and_corrupt_line() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.g6");
    std::fs::write(&list, "Dhc\n").unwrap();
    let o = run(&["sweep", "--source", list.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "sweep");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);

    std::fs::write(&list, "Dhc\n???garbage\nBw\n").unwrap();
    let o = run(&["sweep", "--source", list.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "sweep");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["skipped_lines"], serde_json::json!([2]));

    let o = run(&["sweep", "--source", list.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(stdout(&o).lines().next(), Some("graph6,n,edges,theta_plus_bar,xi_sdp,chi_f,diff,error"));
    assert_eq!(code(&run(&["sweep"])), 64);
    assert_eq!(code(&run(&["sweep", "--source", "/nonexistent"])), 66);
}

#[test]
fn sweep_small_graphs_within_tolerance() {
    let o = run(&["sweep", "--max-vertices", "6", "--connected", "--no-checkpoint", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_output(&o, "sweep");
    assert_eq!(v["graphs"], 143);
    assert!(v["max_diff"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn sweep_resume_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let full = bin().args(["sweep", "--max-vertices", "5", "--no-checkpoint", "--format", "json"]).output().unwrap();
    assert_eq!(code(&full), 0);

    let cache = dir.path().join("cache");
    let partial = || {
        bin()
            .env("CHROMABOUND_CACHE", &cache)
            .args(["sweep", "--max-vertices", "5", "--limit", "7", "--format", "json"])
            .output()
            .unwrap()
    };
    let first = partial();
    assert_eq!(code(&first), 0);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["rows_complete"], 7);
    // one checkpoint file, keyed by the inputs
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    // tear the last record as an interrupted writer would
    let ckpt = files[0].as_ref().unwrap().path();
    let mut text = std::fs::read_to_string(&ckpt).unwrap();
    text.truncate(text.len() - 10);
    std::fs::write(&ckpt, text).unwrap();
    let total = v["graphs"].as_u64().unwrap();
    let mut rounds = 0;
    while serde_json::from_slice::<Value>(&partial().stdout).unwrap()["rows_complete"] != total {
        rounds += 1;
        assert!(rounds <= total / 7 + 2, "resume makes no progress");
    }

    let resumed = bin()
        .env("CHROMABOUND_CACHE", &cache)
        .args(["sweep", "--max-vertices", "5", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(code(&resumed), 0);
    assert_eq!(resumed.stdout, full.stdout);
}

#[test]
fn output_file_gets_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["params", "--gen", "petersen", "--format", "json", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(validator().is_valid(&v));
    assert!((v["params"]["chi_f"]["value"].as_f64().unwrap() - 2.5).abs() < 1e-7);
}
