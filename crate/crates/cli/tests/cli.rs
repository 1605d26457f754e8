use std::process::{Command, Output};

use serde_json::Value;

fn hyperop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperop"))
        .args(args)
        .env_remove("HYPEROP_BUDGET_BITS")
        .env_remove("HYPEROP_BUDGET_STEPS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hyperop(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    hyperop(args).status.code().unwrap()
}

fn records(args: &[&str]) -> Vec<Value> {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    stdout(&full)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is one JSON record"))
        .collect()
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "-r", "2", "3", "2"]), "9\n");
    assert_eq!(stdout(&["eval", "-r", "0", "3", "2"]), "5\n");
    assert_eq!(stdout(&["eval", "-r", "3", "2", "4"]), "65536\n");
    let r = records(&["eval", "-r", "3", "2", "4", "--verify"]);
    assert_eq!(r[0]["result"]["value"], "65536");
    assert_eq!(r[0]["verified"], true);
}

#[test]
fn numbers_are_full_decimal_strings() {
    let r = records(&["eval", "-r", "2", "2", "200"]);
    assert_eq!(
        r[0]["result"]["value"],
        "1606938044258990275541962092341162602522202993782792835301376"
    );
}

#[test]
fn factor_examples() {
    let r = records(&["factor", "9"]);
    assert_eq!(r[0]["result"]["components"], serde_json::json!(["3", "2"]));
    assert_eq!(r[0]["result"]["rendered"], "3^2");
    let r = records(&["factor", "6"]);
    assert_eq!(r[0]["result"]["components"], serde_json::json!(["6"]));
    assert_eq!(r[0]["result"]["biprime"], true);
    let r = records(&["factor", "65536", "--verify"]);
    assert_eq!(
        r[0]["result"]["components"],
        serde_json::json!(["2", "2", "2", "2"])
    );
    assert_eq!(r[0]["verified"], true);
    assert_eq!(stdout(&["factor", "9"]), "9 = 3^2 [3, 2]\n");
}

#[test]
fn factor_at_rank_three() {
    let r = records(&["factor", "65536", "--rank", "3", "--verify"]);
    assert_eq!(
        r[0]["result"]["components"],
        serde_json::json!(["2", "2", "2"])
    );
    assert_eq!(r[0]["verified"], true);
    let r = records(&["factor", "256", "--rank", "3"]);
    assert_eq!(r[0]["result"]["components"], Value::Null);
    assert_eq!(
        r[0]["result"]["decompositions"],
        serde_json::json!([["4", "2"]])
    );
}

#[test]
fn classify_examples() {
    let r = records(&["classify", "-r", "2", "2..10"]);
    let compound: Vec<&str> = r
        .iter()
        .filter(|v| v["result"]["class"] == "compound")
        .map(|v| v["input"]["m"].as_str().unwrap())
        .collect();
    assert_eq!(compound, ["4", "8", "9"]);
    assert_eq!(r.len(), 9);

    let r = records(&["classify", "-r", "0", "1..1", "--stats"]);
    assert_eq!(r[0]["result"]["class"], "prime");
    assert_eq!(r[1]["operation"], "stats");

    let r = records(&["classify", "-r", "1", "2..20", "--stats"]);
    assert_eq!(r.last().unwrap()["result"]["prime"], "8");
}

#[test]
fn classify_output_follows_input_order() {
    let r = records(&["classify", "-r", "2", "2..40000", "--stats"]);
    let ms: Vec<u64> = r[..r.len() - 1]
        .iter()
        .map(|v| v["input"]["m"].as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ms, (2..=40_000).collect::<Vec<_>>());
}

#[test]
fn divisibility_examples() {
    let r = records(&["divisor", "-r", "2", "3", "9"]);
    assert_eq!(r[0]["result"]["divisor"], true);
    assert_eq!(r[0]["result"]["quotient"], "2");
    let r = records(&["coprime", "-r", "1", "8", "15"]);
    assert_eq!(r[0]["result"]["coprime"], true);
    let r = records(&["gcd", "-r", "2", "4", "16", "--verify"]);
    assert_eq!(r[0]["result"]["gcd"], "4");
    assert_eq!(r[0]["verified"], true);
    let r = records(&["coprime", "-r", "0", "3", "5"]);
    assert_eq!(
        r[0]["result"]["common_divisors"],
        serde_json::json!({"low": "1", "high": "3"})
    );
}

#[test]
fn hypothesis_examples() {
    let r = records(&["hypothesis", "-r", "3", "100"]);
    assert_eq!(
        r[0]["result"]["compound"],
        serde_json::json!(["4", "16", "27"])
    );
    assert_eq!(r[0]["result"]["counterexamples"], serde_json::json!([]));
    let r = records(&["hypothesis", "-r", "3", "3"]);
    assert_eq!(r[0]["result"]["compound"], serde_json::json!([]));
    let r = records(&["hypothesis", "-r", "3", "1000000000", "--verify"]);
    assert_eq!(r[0]["result"]["compound"].as_array().unwrap().len(), 10);
    assert_eq!(r[0]["result"]["counterexamples"], serde_json::json!([]));
    assert_eq!(r[0]["result"]["existence_gaps"], serde_json::json!(["256"]));
    assert_eq!(r[0]["verified"], true);
}

#[test]
fn hypothesis_writes_report_file() {
    let dir = std::env::temp_dir().join(format!("hyperop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let summary = stdout(&[
        "hypothesis",
        "-r",
        "3",
        "1000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(summary.contains("no counterexample below 1000"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["operation"], "hypothesis");
    assert_eq!(
        doc["result"]["compound"],
        serde_json::json!(["4", "16", "27", "256"])
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["factor", "1"]), 2);
    assert_eq!(code(&["classify", "-r", "2", "5..x"]), 2);
    assert_eq!(code(&["classify", "-r", "2", "9..5"]), 2);
    assert_eq!(code(&["gcd", "-r", "2", "4", "4"]), 2);
    assert_eq!(code(&["coprime", "-r", "2", "1", "4"]), 2);
    assert_eq!(code(&["hypothesis", "-r", "2", "100"]), 2);
    assert_eq!(code(&["eval", "-r", "3", "10", "4"]), 3);
    assert_eq!(
        code(&["eval", "-r", "2", "2", "1000", "--max-digits", "10"]),
        3
    );
    assert_eq!(
        code(&["eval", "-r", "4", "3", "3", "--budget-bits", "64"]),
        3
    );
    assert_eq!(code(&["eval", "-r", "x", "1", "2"]), 1);
    assert_eq!(code(&["eval", "-r", "2", "-1", "2"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(
        code(&["eval", "--budget-bits", "10", "-r", "0", "1", "1"]),
        1
    );
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn budget_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperop"))
        .args(["eval", "-r", "2", "2", "100"])
        .env("HYPEROP_BUDGET_BITS", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(code(&["eval", "-r", "2", "2", "100"]), 0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--json", "classify", "-r", "3", "2..300", "--stats"][..],
        &["--json", "factor", "1000000"],
        &["--json", "gcd", "-r", "1", "360", "840"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
    let strip = |s: String| {
        let mut v: Value = serde_json::from_str(&s).unwrap();
        v.as_object_mut().unwrap().remove("metadata");
        v
    };
    let scan = || strip(stdout(&["--json", "hypothesis", "-r", "3", "1000000000"]));
    assert_eq!(scan(), scan());
}

#[test]
fn factor_output_round_trips() {
    for m in [
        "64",
        "65536",
        "1000000",
        "10000000000000000000000",
        "7625597484987",
    ] {
        let r = records(&["factor", m]);
        let components: Vec<String> = r[0]["result"]["components"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_owned())
            .collect();
        // Evaluate the tower top-down through the eval command.
        let mut acc = components.last().unwrap().clone();
        for c in components.iter().rev().skip(1) {
            let e = records(&["eval", "-r", "2", c, &acc]);
            acc = e[0]["result"]["value"].as_str().unwrap().to_owned();
        }
        assert_eq!(acc, m);
    }
}
