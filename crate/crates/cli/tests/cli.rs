//! End-to-end tests against the compiled `bootlab` binary: output contracts,
//! determinism, and the exit-code matrix.

use std::io::Write;
use std::process::{Command, Output};

const SQUARE4: &str = r#"{"kind":"uniform","d":2,"ell":0,"n":4,"r":2}"#;
const SQUARE8: &str = r#"{"kind":"uniform","d":2,"ell":0,"n":8,"r":2}"#;

fn bootlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bootlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = bootlab(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

#[test]
fn lgap_worked_example_is_three_quarters() {
    let v = stdout_json(&["lgap", "--m", "1", "--ell", "0", "--u", "0.5", "--format", "json"]);
    assert_eq!(v["probability"].as_f64().unwrap(), 0.75);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn closure_of_empty_set_is_empty() {
    let v = stdout_json(&["close", "--spec", SQUARE4, "--cells", "", "--format", "json"]);
    assert_eq!(v["closure_size"], 0);
    assert_eq!(v["generations"], 0);
    assert_eq!(v["percolates"], false);
    assert_eq!(v["closure"].as_array().unwrap().len(), 0);
}

#[test]
fn table_csv_is_a_triangle_with_header() {
    let out = bootlab(&["table", "--dmax", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "r/d,2,3,4");
    // Row r=3 leaves d=2 blank; row r=4 leaves d=2,3 blank.
    assert!(lines[2].starts_with("3,,"));
    assert!(lines[3].starts_with("4,,,"));
    let first: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    let pi = std::f64::consts::PI;
    assert!((first - pi * pi / 18.0).abs() < 1e-6);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for format in ["json", "csv", "text"] {
        let args = [
            "prob", "--spec", SQUARE8, "--p", "0.12", "--trials", "300", "--seed", "42",
            "--format", format,
        ];
        let a = bootlab(&args);
        let b = bootlab(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "format {format} not deterministic");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "prob", "--spec", SQUARE8, "--p", "0.12", "--trials", "400", "--seed", "7", "--format",
        "csv",
    ];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_bootlab"))
            .args(args)
            .env("BOOTLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "threads={threads}");
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("13"));
}

#[test]
fn monte_carlo_csv_contract() {
    let out = bootlab(&[
        "prob", "--spec", SQUARE4, "--p", "0.3", "--trials", "50", "--seed", "9", "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,estimate,half_width,trials,seed");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "0.3");
    assert_eq!(fields[3], "50");
    assert_eq!(fields[4], "9");
}

#[test]
fn json_reports_reparse_and_carry_schema_version() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["lambda", "--d", "3", "--r", "2"],
        vec!["highdim-lambda"],
        vec!["span", "--spec", SQUARE4, "--cells", "1,1;2,2"],
        vec![
            "wpath", "--f", "g:1", "--a", "0.5,0.5", "--b", "2,2", "--grid", "8",
        ],
        vec![
            "pc", "--spec", SQUARE4, "--trials", "40", "--tol", "0.05", "--seed", "3",
        ],
    ];
    for mut args in cases {
        args.extend_from_slice(&["--format", "json"]);
        let v = stdout_json(&args);
        assert_eq!(v["schema_version"], 1, "args {args:?}");
    }
}

#[test]
fn chain_accepts_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"s":2,"graphs":[{{"good":[[[1,1],[1,2]]],"bad":[]}},{{"good":[],"bad":[[[2,1],[1,2]]]}}]}}"#
    )
    .unwrap();
    let v = stdout_json(&["chain", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["layers"], 2);
    assert_eq!(v["s"], 2);
    assert_eq!(v["admissible"], true);
    assert!(v["crossed"].is_boolean());
}

#[test]
fn cells_accept_files_too() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cells.txt");
    std::fs::write(&path, "# diagonal seeds\n1,1\n2,2\n3,3\n4,4\n").unwrap();
    let v = stdout_json(&["close", "--spec", SQUARE4, "--cells", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["seed_count"], 4);
    assert_eq!(v["percolates"], true);
}

#[test]
fn exit_code_matrix() {
    // Unknown subcommand: usage on stderr, 64.
    let out = bootlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(!out.stderr.is_empty());

    // Domain error from a module precondition: 2.
    let out = bootlab(&["lambda", "--d", "1", "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed flag value: 2.
    let out = bootlab(&["lambda", "--d", "three", "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // Unreachable tolerance: convergence failure, 3.
    let out = bootlab(&["lambda", "--d", "7", "--r", "2", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(3));

    // Help and version: 0.
    assert_eq!(bootlab(&["--help"]).status.code(), Some(0));
    assert_eq!(bootlab(&["--version"]).status.code(), Some(0));
    assert_eq!(bootlab(&["close", "--help"]).status.code(), Some(0));

    // Bad thread override: 2.
    let out = Command::new(env!("CARGO_BIN_EXE_bootlab"))
        .args(["lgap", "--m", "1", "--ell", "0", "--u", "0.5"])
        .env("BOOTLAB_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_is_a_rendering_of_the_json_fields() {
    let json = stdout_json(&["lgap", "--m", "2", "--ell", "1", "--u", "0.4", "--format", "json"]);
    let out = bootlab(&["lgap", "--m", "2", "--ell", "1", "--u", "0.4", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["ell", "m", "probability", "schema_version", "u"] {
        assert!(text.contains(&format!("{key}:")), "text output missing {key}");
        assert!(json.get(key).is_some());
    }
}
