use std::process::{Command, Output};

use serde_json::Value;

fn vqss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vqss"))
        .args(args)
        .env_remove("QSS_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn run_recovers_the_secret() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = vqss(&["run", "--d", "5", "--t", "2", "--n", "3", "--secret", "4", "--seed", "42", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let tr: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(tr["secret_S"], 4);
    assert_eq!(tr["recovered"]["1"], 4);
    assert_eq!(tr["recovered"]["2"], 4);
    assert_eq!(tr["seed"], 42);
    assert!(tr["aborted"].is_null());
    let names: Vec<_> = tr["phases"].as_array().unwrap().iter().map(|p| p["name"].clone()).collect();
    assert_eq!(names, ["preparation", "distribution", "measurement", "testing", "recovery"]);
}

#[test]
fn invalid_parameters_exit_2() {
    let out = vqss(&["run", "--d", "4", "--t", "2", "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d must be an odd prime"));
    assert!(out.stdout.is_empty());

    for args in [
        &["run", "--d", "5", "--t", "6", "--n", "3", "--seed", "1"][..],
        &["run", "--d", "5", "--t", "2", "--secret", "5", "--seed", "1"],
        &["run", "--d", "5", "--t", "2", "--recovery", "1,1", "--seed", "1"],
        &["run", "--d", "5", "--t", "2", "--n", "2", "--points", "1,1", "--seed", "1"],
        &["attack", "--type", "replay", "--d", "5", "--t", "2", "--seed", "1"],
        &["attack", "--type", "intercept-resend", "--d", "5", "--t", "2", "--position", "2", "--seed", "1"],
        &["attack", "--type", "collusion", "--d", "5", "--t", "3", "--cap", "1000", "--seed", "1"],
        &["mub-verify", "--d", "4"],
    ] {
        assert_eq!(vqss(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("t.json");
    let out = vqss(&["run", "--d", "5", "--t", "2", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn seed_falls_back_to_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_vqss"))
        .args(["run", "--d", "7", "--t", "3"])
        .env("QSS_SEED", "77")
        .output()
        .unwrap();
    let with_flag = vqss(&["run", "--d", "7", "--t", "3", "--seed", "77"]);
    assert_eq!(with_env.status.code(), Some(0));
    assert_eq!(with_env.stdout, with_flag.stdout);
    assert_eq!(json(&with_env)["seed"], 77);
}

#[test]
fn unseeded_run_records_its_seed() {
    let out = vqss(&["run", "--d", "5", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["seed"].is_u64());
}

#[test]
fn attack_outputs_stats() {
    let out = vqss(&["attack", "--type", "dishonest", "--d", "5", "--t", "3", "--trials", "100", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    assert_eq!(s["kind"], "dishonest-participant");
    assert_eq!(s["detection_rate"], 1.0);
    assert_eq!(s["cheater_identified_rate"], 1.0);
    assert!(s["eve_basis_match_rate"].is_null());

    let out = vqss(&["attack", "--type", "collusion", "--d", "3", "--t", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let post = json(&out)["posterior"].clone();
    assert_eq!(post, serde_json::json!({"0": 1, "1": 1, "2": 1}));
}

#[test]
fn intercept_resend_rates() {
    let out = vqss(&["attack", "--type", "intercept-resend", "--d", "5", "--t", "3", "--trials", "10000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    let m = s["eve_basis_match_rate"].as_f64().unwrap();
    let det = s["detection_rate"].as_f64().unwrap();
    assert!((m - 0.2).abs() <= 0.012, "{m}");
    assert!((det - 0.64).abs() <= 0.0144, "{det}");
}

#[test]
fn sweep_writes_csv() {
    let out = vqss(&["sweep", "--d", "3,5,7", "--t", "2", "--attack", "intercept-resend", "--trials", "3000", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["d", "t", "attack", "metric", "value", "ci3sigma", "trials", "seed"]
    );
    let mut matched = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        if &rec[3] == "eve_basis_match_rate" {
            let d: f64 = rec[0].parse().unwrap();
            let v: f64 = rec[4].parse().unwrap();
            let ci: f64 = rec[5].parse().unwrap();
            assert!((v - 1.0 / d).abs() <= ci, "d={d}: {v} +- {ci}");
            matched += 1;
        }
    }
    assert_eq!(matched, 3);
}

#[test]
fn empty_sweep_exits_2() {
    assert_eq!(vqss(&["sweep", "--t", "2", "--trials", "10"]).status.code(), Some(2));
    assert_eq!(vqss(&["sweep", "--d", "5", "--trials", "10"]).status.code(), Some(2));
}

#[test]
fn mub_verify_summary() {
    let out = vqss(&["mub-verify", "--d", "7", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.contains("8 bases"), "{line}");

    let out = vqss(&["mub-verify", "--d", "3", "--tol=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("first violation"));
}
