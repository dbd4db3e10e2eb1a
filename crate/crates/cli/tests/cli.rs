use std::process::{Command, Output};

use serde_json::Value;

fn orbitq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitq")).args(args).env_remove("ORBITQ_SEED").output().expect("binary runs")
}

fn orbitq_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitq")).args(args).env("ORBITQ_SEED", seed).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn hilbert_example_table() {
    let out = orbitq(&["hilbert", "--algebra", "A1", "--levi", "", "--degree", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    let ranks: Vec<u64> = v["details"]["table"].as_array().unwrap().iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 5, 14, 30]);
}

#[test]
fn csv_has_degree_rank_header() {
    let out = orbitq(&["hilbert", "--degree", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,rank\n0,1\n1,5\n2,14\n");
}

#[test]
fn csv_is_refused_without_a_table() {
    let out = orbitq(&["gq", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_lambda_is_invalid_input() {
    let out = orbitq(&["hilbert", "--algebra", "A1", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("λ_i must be nonzero"));
}

#[test]
fn bad_levi_and_unknown_flags_exit_two() {
    assert_eq!(orbitq(&["verify-all", "--algebra", "A2", "--levi", "5"]).status.code(), Some(2));
    assert_eq!(orbitq(&["hilbert", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(orbitq(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(orbitq(&["hilbert", "--algebra", "G2"]).status.code(), Some(2));
    assert_eq!(orbitq(&["bracket2", "--algebra", "A2"]).status.code(), Some(2));
}

#[test]
fn exhausted_depth_is_inconclusive() {
    let out = orbitq(&["hilbert", "--depth-cap", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["status"], "inconclusive");
}

#[test]
fn poisson_a2_passes() {
    let out = orbitq(&["poisson", "--algebra", "A2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["details"]["pairs"], 28);
    assert!(v["details"]["failing_pairs"].as_array().unwrap().is_empty());
}

#[test]
fn every_subcommand_passes_on_sl2() {
    for cmd in ["roots", "verma-act", "shapovalov", "flatness", "multiplicity", "orbit-dim", "gq", "q-hilbert", "bracket2"] {
        let out = orbitq(&[cmd, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json_of(&out)["status"], "pass", "{cmd}");
    }
    let out = orbitq(&["equivariance", "--pairs", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_and_seed_env_overrides() {
    let a = orbitq(&["orbit-dim", "--format", "json", "--seed", "4"]).stdout;
    let b = orbitq(&["orbit-dim", "--format", "json", "--seed", "4"]).stdout;
    assert_eq!(a, b);
    let c = orbitq_env(&["orbit-dim", "--format", "json", "--seed", "9"], "4").stdout;
    assert_eq!(a, c);
    let d = orbitq_env(&["orbit-dim", "--format", "json", "--seed", "4"], "5").stdout;
    assert_ne!(a, d);
}

#[test]
fn quantum_checks_are_skipped_at_t_order_zero() {
    let out = orbitq(&["verify-all", "--t-order", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 9);
    let skipped: Vec<&str> = checks.iter().filter(|c| c["status"] == "skipped").map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(skipped, vec!["gq", "equivariance", "q-hilbert", "bracket2"]);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("orbitq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("roots.json");
    let out = orbitq(&["roots", "--algebra", "B2", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["details"]["root_system"]["positive_roots"].as_array().unwrap().len(), 4);
    std::fs::remove_dir_all(dir).unwrap();
}
