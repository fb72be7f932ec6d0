//! End-to-end tests of the `matrix-census` binary.

use std::process::Command;

use serde_json::Value;

fn envelope_schema() -> Value {
    serde_json::json!({
        "type": "object",
        "required": ["schema_version", "command", "params", "result", "timing_ms"],
        "additionalProperties": false,
        "properties": {
            "schema_version": { "const": "1" },
            "command": { "enum": ["count", "verify", "rcf", "centralizer", "factor", "orbit"] },
            "params": {
                "type": "object",
                "required": ["q", "p", "k"],
                "properties": {
                    "q": { "type": "integer", "minimum": 2 },
                    "p": { "type": "integer", "minimum": 2 },
                    "k": { "type": "integer", "minimum": 1 }
                }
            },
            "result": { "type": "object" },
            "timing_ms": { "type": "integer", "minimum": 0 }
        }
    })
}

fn error_schema() -> Value {
    serde_json::json!({
        "type": "object",
        "required": ["error"],
        "additionalProperties": false,
        "properties": {
            "error": {
                "type": "object",
                "required": ["code", "message"],
                "properties": {
                    "code": { "type": "string", "pattern": "^[a-z_]+$" },
                    "message": { "type": "string" }
                }
            }
        }
    })
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_matrix-census"))
        .args(args)
        .env_remove("MATRIX_CENSUS_THREADS")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Runs a command expected to succeed and returns its validated envelope.
fn ok(args: &[&str]) -> Value {
    let run = cli(args);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
    assert!(run.stderr.is_empty());
    let value: Value = serde_json::from_str(&run.stdout).expect("stdout is JSON");
    let validator = jsonschema::validator_for(&envelope_schema()).unwrap();
    assert!(validator.is_valid(&value), "{value}");
    let command = args.iter().find(|a| !a.starts_with("--")).unwrap();
    assert_eq!(value["command"], *command);
    value
}

/// Runs a command expected to fail and returns the exit code and error code.
fn err(args: &[&str]) -> (i32, String) {
    let run = cli(args);
    assert!(run.stdout.is_empty(), "{args:?} printed {}", run.stdout);
    assert_eq!(
        run.stderr.lines().count(),
        1,
        "one error line: {}",
        run.stderr
    );
    let value: Value = serde_json::from_str(run.stderr.trim()).expect("stderr is JSON");
    let validator = jsonschema::validator_for(&error_schema()).unwrap();
    assert!(validator.is_valid(&value), "{value}");
    (
        run.code,
        value["error"]["code"].as_str().unwrap().to_string(),
    )
}

#[test]
fn count_examples() {
    let v = ok(&["count", "--q", "2", "--n", "2", "--poly", "x^2+x+1"]);
    assert_eq!(v["result"]["count"], "2");
    assert_eq!(v["result"]["formula"], "theorem1");

    let v = ok(&["count", "--q", "2", "--n", "2", "--poly", "x^2"]);
    assert_eq!(v["result"]["count"], "4");
    assert_eq!(v["result"]["formula"], "general");
    assert_eq!(
        v["result"]["factorization"],
        serde_json::json!([{ "factor": "x", "multiplicity": 2 }])
    );

    let v = ok(&["count", "--q", "2", "--n", "3"]);
    assert_eq!(v["result"]["count"], "24");
    assert_eq!(v["params"]["seed"], 0);
}

#[test]
fn count_accepts_extension_fields_both_ways() {
    let a = ok(&["--no-timing", "count", "--q", "4", "--n", "2"]);
    let b = ok(&["--no-timing", "count", "--q", "2", "--k", "2", "--n", "2"]);
    assert_eq!(a, b);
    assert_eq!(a["params"]["p"], 2);
    assert_eq!(a["params"]["k"], 2);
    // (16 - 4)
    assert_eq!(a["result"]["count"], "12");
}

#[test]
fn counts_are_decimal_strings_even_when_huge() {
    let v = ok(&["count", "--q", "9", "--n", "12"]);
    let count = v["result"]["count"].as_str().unwrap();
    assert!(count.len() > 100 && count.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn verify_examples() {
    let v = ok(&["verify", "--q", "2", "--n", "2", "--mode", "both"]);
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["result"]["total"], "16");
    assert_eq!(v["result"]["mismatches"], serde_json::json!([]));

    let v = ok(&[
        "verify",
        "--q",
        "3",
        "--n",
        "2",
        "--mode",
        "both",
        "--threads",
        "2",
    ]);
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["result"]["total"], "81");

    let v = ok(&["verify", "--q", "5", "--n", "3", "--mode", "formula"]);
    assert_eq!(v["result"]["total"], "1953125");
    assert!(v["result"].get("census").is_none());
}

#[test]
fn verify_reports_budget_with_its_own_exit_code() {
    assert_eq!(
        err(&["verify", "--q", "2", "--n", "9", "--mode", "bruteforce"]),
        (3, "budget_exceeded".into())
    );
    assert_eq!(
        err(&[
            "verify",
            "--q",
            "2",
            "--n",
            "3",
            "--mode",
            "bruteforce",
            "--budget",
            "100"
        ]),
        (3, "budget_exceeded".into())
    );
    assert_eq!(err(&["count", "--q", "2", "--k", "30", "--n", "2"]).0, 3);
}

#[test]
fn verify_csv_lists_every_polynomial() {
    let run = cli(&["verify", "--q", "2", "--n", "2", "--format", "csv"]);
    assert_eq!(run.code, 0);
    assert_eq!(
        run.stdout,
        "polynomial,census,formula\nx^2,4,4\nx^2+x,6,6\nx^2+1,4,4\nx^2+x+1,2,2\n"
    );
}

#[test]
fn threads_fall_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_matrix-census"))
        .args(["--no-timing", "verify", "--q", "2", "--n", "3"])
        .env("MATRIX_CENSUS_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let plain = cli(&[
        "--no-timing",
        "verify",
        "--q",
        "2",
        "--n",
        "3",
        "--threads",
        "1",
    ]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain.stdout);
}

#[test]
fn structural_commands() {
    let v = ok(&["rcf", "--q", "2", "--matrix", "0,1;1,1"]);
    assert_eq!(v["result"]["blocks"], serde_json::json!(["x^2+x+1"]));

    let v = ok(&["rcf", "--q", "2", "--matrix", "0,0;0,1"]);
    assert_eq!(v["result"]["blocks"], serde_json::json!(["x", "x+1"]));
    assert_eq!(v["result"]["charpoly"], "x^2+x");

    let v = ok(&["centralizer", "--q", "2", "--matrix", "0,1;1,1"]);
    assert_eq!(v["result"]["dimension"], 2);
    assert_eq!(v["result"]["order"], "4");
    assert_eq!(v["result"]["units"], "3");
    assert_eq!(v["result"]["is_polynomial_centralizer"], true);

    let v = ok(&["centralizer", "--q", "2", "--matrix", "1,0;0,1"]);
    assert_eq!(v["result"]["dimension"], 4);
    assert_eq!(v["result"]["units"], "6");
    assert_eq!(v["result"]["is_polynomial_centralizer"], false);

    // Unit count out of budget is reported as null, not an error.
    let v = ok(&[
        "centralizer",
        "--q",
        "2",
        "--matrix",
        "1,0;0,1",
        "--budget",
        "4",
    ]);
    assert_eq!(v["result"]["units"], Value::Null);

    let v = ok(&["factor", "--q", "2", "--poly", "x^4+x^2+1"]);
    assert_eq!(
        v["result"]["factors"],
        serde_json::json!([{ "factor": "x^2+x+1", "multiplicity": 2 }])
    );
    assert_eq!(v["result"]["irreducible"], false);

    let v = ok(&["orbit", "--q", "3", "--matrix", "0,2;1,0"]);
    assert_eq!(v["result"]["charpoly"], "x^2+1");
    assert_eq!(v["result"]["stabilizer_order"], "8");
    assert_eq!(v["result"]["orbit_size"], "6");
    assert_eq!(v["result"]["consistent"], true);
}

#[test]
fn domain_errors() {
    assert_eq!(
        err(&["count", "--q", "2", "--poly", "x^2+x+"]),
        (1, "parse_error".into())
    );
    assert_eq!(
        err(&["count", "--q", "3", "--poly", "2*x^2+1"]),
        (1, "not_monic".into())
    );
    assert_eq!(
        err(&["count", "--q", "2", "--n", "3", "--poly", "x^2+1"]),
        (1, "invalid_argument".into())
    );
    assert_eq!(
        err(&["count", "--q", "6", "--n", "2"]),
        (1, "invalid_argument".into())
    );
    assert_eq!(
        err(&["count", "--q", "4", "--k", "2", "--n", "2"]),
        (1, "not_prime".into())
    );
    assert_eq!(err(&["rcf", "--q", "2", "--matrix", "0,1;1"]).0, 1);
    assert_eq!(
        err(&["rcf", "--q", "2", "--matrix", "0,2;1,1"]),
        (1, "coefficient_out_of_range".into())
    );
    assert_eq!(
        err(&["orbit", "--q", "2", "--matrix", "1,0;0,1"]),
        (1, "reducible_charpoly".into())
    );
    assert_eq!(err(&["factor", "--q", "2", "--poly", "0"]).0, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(err(&["frobnicate"]), (2, "usage".into()));
    assert_eq!(err(&["count", "--n", "2"]), (2, "usage".into()));
    assert_eq!(err(&["count", "--q", "2"]), (2, "usage".into()));
    assert_eq!(
        err(&["verify", "--q", "2", "--n", "2", "--mode", "sideways"]),
        (2, "usage".into())
    );
}

#[test]
fn help_documents_text_formats() {
    let run = cli(&["--help"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("rows separated by ';'"));
    assert!(run.stdout.contains("base-p digits"));
}

#[test]
fn verify_exit_code_follows_pass_flag() {
    use matrix_census_cli::{run_with_hooks, Hooks};
    let args = [
        "matrix-census",
        "--no-timing",
        "verify",
        "--q",
        "2",
        "--n",
        "2",
    ];
    let honest = run_with_hooks(args, Hooks::default());
    assert_eq!(honest.code, 0);
    let corrupt = run_with_hooks(
        args,
        Hooks {
            corrupt_formula: true,
        },
    );
    assert_eq!(corrupt.code, 1);
    let v: Value = serde_json::from_str(&corrupt.stdout).unwrap();
    assert_eq!(v["result"]["pass"], false);
    assert!(!v["result"]["mismatches"].as_array().unwrap().is_empty());
    assert!(corrupt.stderr.is_empty());
}

#[test]
fn output_is_byte_stable() {
    let args = [
        "--no-timing",
        "factor",
        "--q",
        "5",
        "--poly",
        "x^12+3*x^5+x+2",
        "--seed",
        "17",
    ];
    let first = cli(&args).stdout;
    for _ in 0..3 {
        assert_eq!(cli(&args).stdout, first);
    }
}
