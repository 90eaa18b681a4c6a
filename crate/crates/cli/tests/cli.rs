use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qmaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmaps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs a generating command with `--output` and returns the written path.
fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = args.to_vec();
    full.extend(["--output", path_str(&path)]);
    let out = qmaps(&full);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

fn matrix_entries(m: &Value) -> Vec<(f64, f64)> {
    m["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_f64().unwrap(), e[1].as_f64().unwrap()))
        .collect()
}

#[test]
fn identity_to_bform_is_the_unnormalized_bell_projector() {
    let dir = TempDir::new().unwrap();
    let id = generate(&dir, "id.json", &["channel", "--kind", "identity"]);
    let v = json_of(&qmaps(&[
        "convert",
        "--input",
        path_str(&id),
        "--to",
        "bform",
    ]));
    assert_eq!(v["repr"], "bform");
    assert_eq!(v["meta"]["converted_from"], "kraus");
    assert!(v["meta"]["residual"].as_f64().unwrap() < 1e-12);
    let entries = matrix_entries(&v["payload"]);
    for (idx, (re, im)) in entries.into_iter().enumerate() {
        let (r, c) = (idx / 4, idx % 4);
        let expected = if [0, 3].contains(&r) && [0, 3].contains(&c) {
            1.0
        } else {
            0.0
        };
        assert!(
            (re - expected).abs() < 1e-12 && im.abs() < 1e-12,
            "entry ({r},{c})"
        );
    }
}

#[test]
fn depolarizing_bform_to_kraus_has_four_operators() {
    let dir = TempDir::new().unwrap();
    let b = generate(
        &dir,
        "dep.json",
        &[
            "channel",
            "--kind",
            "depolarizing",
            "--p",
            "0.3",
            "--to",
            "bform",
        ],
    );
    let v = json_of(&qmaps(&[
        "convert",
        "--input",
        path_str(&b),
        "--to",
        "kraus",
    ]));
    assert_eq!(v["payload"]["left"].as_array().unwrap().len(), 4);
    let check = json_of(&qmaps(&["check", "--input", path_str(&b)]));
    assert_eq!(check["tp"], true);
    assert_eq!(check["hp"], true);
    assert_eq!(check["cp"], true);
    assert_eq!(check["kraus_rank"], 4);
    assert_eq!(check["tolerance"], 1e-9);
}

#[test]
fn transpose_map_fails_cp_with_min_eig_minus_one() {
    let dir = TempDir::new().unwrap();
    // The transpose has the swap operator as its B form.
    let swap = serde_json::json!({
        "d_in": 2, "d_out": 2, "repr": "bform",
        "payload": {"rows": 4, "cols": 4, "data": [
            [1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0],
            [0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0],
            [0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0],
            [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}
    });
    let path = dir.path().join("transpose.json");
    fs::write(&path, swap.to_string()).unwrap();
    let v = json_of(&qmaps(&["check", "--input", path_str(&path)]));
    assert_eq!(v["cp"], false);
    assert_eq!(v["tp"], true);
    assert!(v["kraus_rank"].is_null());
    assert!((v["min_eig"].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn identity_check() {
    let dir = TempDir::new().unwrap();
    let id = generate(
        &dir,
        "id.json",
        &["channel", "--kind", "identity", "--to", "aform"],
    );
    let v = json_of(&qmaps(&["check", "--input", path_str(&id)]));
    assert_eq!(
        (v["tp"].clone(), v["hp"].clone(), v["cp"].clone()),
        (Value::Bool(true), Value::Bool(true), Value::Bool(true))
    );
    assert_eq!(v["kraus_rank"], 1);
}

#[test]
fn ncp_demo_reports_negative_prediction_and_cp_superchannel() {
    let v = json_of(&qmaps(&["ncp-demo", "--mu", "1", "--nu", "1"]));
    let min = v["verdicts"]["min_eig"].as_f64().unwrap();
    assert!(
        (min - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-9,
        "min_eig {min}"
    );
    assert_eq!(v["verdicts"]["cp"], false);
    assert_eq!(v["verdicts"]["superchannel_cp"], true);
}

#[test]
fn nonmarkov_separates_fresh_and_swap_environments() {
    let dir = TempDir::new().unwrap();
    let fresh = generate(
        &dir,
        "fresh.json",
        &["dilate", "--preset", "fresh", "-k", "2", "--seed", "5"],
    );
    let swap = generate(
        &dir,
        "swap.json",
        &["dilate", "--preset", "swap", "-k", "2"],
    );
    let f = json_of(&qmaps(&[
        "nonmarkov",
        "--input",
        path_str(&fresh),
        "--distance",
        "trace",
    ]));
    assert!(f["non_markovianity"].as_f64().unwrap() < 1e-9);
    assert_eq!(f["is_markov"], true);
    let s = json_of(&qmaps(&[
        "nonmarkov",
        "--input",
        path_str(&swap),
        "--distance",
        "trace",
    ]));
    assert!(s["non_markovianity"].as_f64().unwrap() > 0.1);
    assert_eq!(s["is_markov"], false);
    assert_eq!(s["normalization"], "unit_trace");
}

#[test]
fn tomography_output_feeds_nonmarkov() {
    let dir = TempDir::new().unwrap();
    let swap = generate(&dir, "swap.json", &["dilate", "--preset", "swap"]);
    let pt = generate(
        &dir,
        "pt.json",
        &["tomography", "--dilation", path_str(&swap)],
    );
    let built = generate(
        &dir,
        "built.json",
        &["process-tensor", "--dilation", path_str(&swap)],
    );
    let a: Value = serde_json::from_str(&fs::read_to_string(&pt).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&fs::read_to_string(&built).unwrap()).unwrap();
    assert_eq!(a["leg_order"], b["leg_order"]);
    let (ea, eb) = (matrix_entries(&a["choi"]), matrix_entries(&b["choi"]));
    let worst = ea
        .iter()
        .zip(&eb)
        .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
        .fold(0.0, f64::max);
    assert!(
        worst < 1e-10,
        "tomography differs from direct construction by {worst}"
    );
    let v = json_of(&qmaps(&["nonmarkov", "--input", path_str(&pt)]));
    assert!((v["non_markovianity"].as_f64().unwrap() - 0.75).abs() < 1e-9);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(
        qmaps(&["check", "--input", path_str(&bad)]).status.code(),
        Some(4)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        qmaps(&["check", "--input", path_str(&missing)])
            .status
            .code(),
        Some(4)
    );

    let not_psd = dir.path().join("not_psd.json");
    let text = r#"{"d_s": 1, "d_e": 1, "initial_se": {"rows": 1, "cols": 1, "data": [[-1.0, 0.0]]},
                   "unitaries": [{"rows": 1, "cols": 1, "data": [[1.0, 0.0]]}]}"#;
    fs::write(&not_psd, text).unwrap();
    assert_eq!(
        qmaps(&["process-tensor", "--dilation", path_str(&not_psd)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qmaps(&["ncp-demo", "--mu", "1", "--nu", "0.5"])
            .status
            .code(),
        Some(2)
    );

    let big = generate(
        &dir,
        "big.json",
        &[
            "dilate", "--preset", "random", "-k", "4", "--d-s", "3", "--d-e", "1",
        ],
    );
    assert_eq!(
        qmaps(&["process-tensor", "--dilation", path_str(&big)])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qmaps(&["tomography", "--dilation", path_str(&big)])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec![
            "dilate",
            "--preset",
            "random",
            "-k",
            "2",
            "--seed",
            "11",
            "--correlated",
        ],
        vec![
            "channel",
            "--kind",
            "random",
            "--d",
            "3",
            "--seed",
            "4",
            "--to",
            "tomographic",
        ],
        vec!["ncp-demo", "--protocol", "project-rotate"],
    ] {
        assert_eq!(qmaps(&args).stdout, qmaps(&args).stdout, "{args:?}");
    }
    let random = generate(
        &dir,
        "r.json",
        &["dilate", "--preset", "random", "-k", "2", "--seed", "3"],
    );
    let args = ["tomography", "--dilation", path_str(&random)];
    assert_eq!(qmaps(&args).stdout, qmaps(&args).stdout);
}

#[test]
fn output_file_matches_stdout_and_leaves_no_temporaries() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let stdout = qmaps(&["ncp-demo"]).stdout;
    assert!(qmaps(&["ncp-demo", "--output", path_str(&out)])
        .status
        .success());
    assert_eq!(fs::read(&out).unwrap(), stdout);
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 1, "{names:?}");
}

#[test]
fn emit_table_writes_csv_with_header() {
    let dir = TempDir::new().unwrap();
    let swap = generate(&dir, "swap.json", &["dilate", "--preset", "swap"]);
    let csv = dir.path().join("nm.csv");
    assert!(qmaps(&[
        "nonmarkov",
        "--input",
        path_str(&swap),
        "--emit-table",
        path_str(&csv)
    ])
    .status
    .success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,distance,N,surprise_n10");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("2,trace,0.75,"));

    let unsupported = qmaps(&["dilate", "--preset", "swap", "--emit-table", path_str(&csv)]);
    assert_eq!(unsupported.status.code(), Some(2));
}

#[test]
fn relative_entropy_of_swap_is_ln_four() {
    let dir = TempDir::new().unwrap();
    let swap = generate(&dir, "swap.json", &["dilate", "--preset", "swap"]);
    let v = json_of(&qmaps(&[
        "nonmarkov",
        "--input",
        path_str(&swap),
        "--distance",
        "relative-entropy",
    ]));
    assert!((v["non_markovianity"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-9);
    assert_eq!(v["support_failure"], false);
}

#[test]
fn superchannel_applies_an_operation() {
    let dir = TempDir::new().unwrap();
    let dil = generate(
        &dir,
        "d.json",
        &[
            "dilate",
            "--preset",
            "random",
            "-k",
            "1",
            "--correlated",
            "--seed",
            "2",
        ],
    );
    let op = dir.path().join("id_op.json");
    let text = r#"{"d": 2, "trace_class": "tp", "bform": {"rows": 4, "cols": 4, "data": [
        [1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0],
        [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0],
        [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0],
        [1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}}"#;
    fs::write(&op, text).unwrap();
    let v = json_of(&qmaps(&[
        "superchannel",
        "--dilation",
        path_str(&dil),
        "--operation",
        path_str(&op),
    ]));
    assert_eq!(v["cp"], true);
    assert!((v["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}
