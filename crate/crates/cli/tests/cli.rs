//! End-to-end runs of the installed binary. Each test drives real files in a
//! temp directory and checks both the verdict in the exit code and the
//! promised text output.

use std::path::Path;
use std::process::{Command, Output};

fn rsrepair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsrepair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn feasible_reports_bound_and_verdict() {
    let o = rsrepair(&["feasible", "--q", "3", "--m", "4", "--d", "4", "--s", "3", "--r", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("bound: 0.400000"));

    let o = rsrepair(&["feasible", "--q", "2", "--m", "5", "--d", "3", "--s", "2", "--r", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("bound: 0.333333"));

    let o = rsrepair(&["feasible", "--q", "2", "--m", "6", "--d", "4", "--s", "2", "--r", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("infeasible"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&rsrepair(&["feasible", "--m", "4"])), 2);
    assert_eq!(code(&rsrepair(&["no-such-command"])), 2);
    assert_eq!(code(&rsrepair(&["verify", "--scheme", "/no/such/file.json"])), 2);
}

#[test]
fn search_build_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    let scheme = dir.path().join("scheme.json");

    let o = rsrepair(&[
        "search", "--q", "2", "--m", "6", "--d", "3", "--s", "2", "--r", "3",
        "--seed", "11", "--out", pair.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(pair.exists());

    let o = rsrepair(&["build", "--pair", pair.to_str().unwrap(), "--out", scheme.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("[8,4]"));

    let o = rsrepair(&["verify", "--scheme", scheme.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("scheme ok"));
}

#[test]
fn tampered_scheme_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    let scheme = dir.path().join("scheme.json");
    rsrepair(&[
        "search", "--q", "2", "--m", "6", "--d", "3", "--s", "2", "--r", "3",
        "--seed", "11", "--out", pair.to_str().unwrap(),
    ]);
    rsrepair(&["build", "--pair", pair.to_str().unwrap(), "--out", scheme.to_str().unwrap()]);

    // flip one digit of one dual-word entry
    let text = std::fs::read_to_string(&scheme).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &mut v["nodes"][0]["dual_words"][0][1][0][0];
    let old = entry.as_u64().unwrap();
    *entry = serde_json::Value::from(1 - old);
    std::fs::write(&scheme, serde_json::to_string(&v).unwrap()).unwrap();

    let o = rsrepair(&["verify", "--scheme", scheme.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn repair_and_simulate_on_composite_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = dir.path().join("scheme.json");
    let word = dir.path().join("word.json");

    let o = rsrepair(&[
        "build", "--composite", "--q", "2", "--m", "4", "--d", "2", "--s", "1",
        "--out", scheme.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // the all-zero word is in every linear code
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&scheme).unwrap()).unwrap();
    let n = v["code"]["eval_set"].as_array().unwrap().len();
    let zero: Vec<Vec<Vec<u64>>> = vec![vec![vec![0]; 4]; n];
    std::fs::write(&word, serde_json::to_string(&zero).unwrap()).unwrap();

    let o = rsrepair(&[
        "repair", "--scheme", scheme.to_str().unwrap(), "--node", "2",
        "--codeword", word.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("recovered exactly"));

    let o = rsrepair(&[
        "simulate", "--scheme", scheme.to_str().unwrap(), "--codewords", "4", "--seed", "9",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all repairs exact"));
}

#[test]
fn report_is_deterministic_and_matches_reference_bandwidths() {
    let o1 = rsrepair(&["report", "--seed", "0"]);
    assert_eq!(code(&o1), 0, "{}", stdout(&o1));
    let text = stdout(&o1);
    for needle in ["52", "80", "54", "315", "720", "693"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
    let o2 = rsrepair(&["report", "--seed", "0"]);
    assert_eq!(o1.stdout, o2.stdout, "report output must be byte-identical");
}

#[test]
fn badscan_confirms_dichotomy_both_ways() {
    let o = rsrepair(&["badscan", "--q", "2", "--m", "4", "--d", "3", "--s", "2", "--r", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all zero"));

    let o = rsrepair(&["badscan", "--q", "2", "--m", "4", "--d", "2", "--s", "1", "--r", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all positive"));
}

#[test]
fn side_json_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("f.json");
    rsrepair(&[
        "feasible", "--q", "3", "--m", "4", "--d", "4", "--s", "3", "--r", "1",
        "--json", side.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&side).unwrap()).unwrap();
    assert_eq!(v["class"], "q3-rate");
    assert!((v["bound"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert!(Path::new(&side).exists());
}
