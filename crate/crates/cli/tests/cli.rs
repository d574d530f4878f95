use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn ncst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncst"))
        .args(args)
        .output()
        .expect("spawn ncst")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = ncst(&all);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn classical_limit_has_no_quantum_part() {
    let (v, code) = json(&[
        "distance",
        "--p",
        "1,0,0,0",
        "--q",
        "0,0,0,0",
        "--width",
        "1e4",
        "--kappa-sq",
        "0",
    ]);
    assert_eq!(code, 0);
    let row = &v["rows"][0];
    assert_eq!(num(&row["classical"]), -1.0);
    assert_eq!(num(&row["quantum"]), 0.0);
    assert_eq!(num(&row["total"]), -1.0);
    assert_eq!(v["config"]["constants"]["kappa_sq"], 0.0);
}

#[test]
fn quantum_part_is_small_where_the_log_argument_is_one() {
    let s = 2.0f64.sqrt().to_string();
    let p = format!("{s},0,0,0");
    let (v, code) = json(&["distance", "--p", &p, "--width", "minvar"]);
    assert_eq!(code, 0);
    let k2 = num(&v["config"]["constants"]["kappa_sq"]);
    let quantum = num(&v["rows"][0]["quantum"]);
    // the closed form is asymptotic in |s|/ℓ²; at 2ℓ² only its scale is meaningful
    assert!(quantum.abs() < 0.1 * k2 / (2.0 * PI * PI), "{quantum}");
}

#[test]
fn json_reports_follow_the_documented_shape() {
    let (v, _) = json(&["distance", "--p", "1,0.2,0,0", "--diagnostics"]);
    assert_eq!(v["command"], "distance");
    for section in ["constants", "state", "quadrature"] {
        assert!(v["config"][section].is_object(), "{section}");
    }
    assert_eq!(v["input"]["p"].as_array().unwrap().len(), 4);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["kind"], "omega");
    for key in [
        "classical",
        "classical_error",
        "quantum",
        "quantum_error",
        "total",
        "total_error",
    ] {
        assert!(rows[0][key].is_f64(), "{key}");
    }
    assert!(rows[0]["converged"].is_boolean());
}

#[test]
fn causal_classification() {
    let class = |p: &str, width: &str| {
        let (v, code) = json(&["causal", "--p", p, "--width", width]);
        assert_eq!(code, 0);
        (
            v["rows"][0]["classification"].as_str().unwrap().to_string(),
            num(&v["rows"][0]["value"]),
        )
    };
    let (c, value) = class("1,0,0,0", "1e4");
    assert_eq!(c, "future");
    assert!((value - 1.0).abs() < 1e-3);
    assert_eq!(class("-1,0.3,0,0", "1e4").0, "past");
    assert_eq!(class("0,1,0,0", "1e4").0, "spacelike");
    let (c, value) = class("1,0.9,0,0", "10");
    assert_eq!(c, "fuzzy");
    assert!(value > 0.0 && value < 1.0);
}

#[test]
fn verify_suites_report_and_set_the_exit_code() {
    let (v, code) = json(&["verify", "fourier"]);
    assert_eq!(code, 0);
    let checks = v["rows"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    for c in checks {
        for key in [
            "name",
            "expected",
            "computed",
            "error",
            "tolerance",
            "rule",
            "pass",
        ] {
            assert!(!c[key].is_null(), "{key}");
        }
    }
    let (_, code) = json(&["verify", "weyl", "--count", "5"]);
    assert_eq!(code, 0);
    let (_, code) = json(&["verify", "gram", "--count", "5"]);
    assert_eq!(code, 0);
    let (_, code) = json(&["verify", "alpha-limit"]);
    assert_eq!(code, 0);
    // the quoted narrow-width constant is off by 2(1-γ); the suite says so
    let (v, code) = json(&["verify", "minvar"]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("4(1-γ)"));
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let args = [
        "sweep",
        "width",
        "--range",
        "10:1000:3",
        "--log",
        "--p",
        "1,0.5,0,0",
    ];
    let (v, _) = json(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = ncst(&csv_args);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(records.len(), rows.len());
    for (record, row) in records.iter().zip(rows) {
        for (key, field) in headers.iter().zip(record.iter()) {
            match &row[key] {
                Value::Number(n) => {
                    assert_eq!(field.parse::<f64>().unwrap(), n.as_f64().unwrap(), "{key}")
                }
                Value::Null => assert_eq!(field, "", "{key}"),
                Value::String(s) => assert_eq!(field, s, "{key}"),
                Value::Bool(b) => assert_eq!(field, b.to_string(), "{key}"),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn width_sweep_sharpens_causality() {
    let (v, _) = json(&[
        "sweep",
        "width",
        "--range",
        "1:10000:5",
        "--log",
        "--p",
        "1,0.5,0,0",
    ]);
    let values: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| num(&r["causal"]))
        .collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{values:?}");
    assert!((values[4] - 1.0).abs() < 1e-6);
    let (v, _) = json(&[
        "sweep",
        "width",
        "--range",
        "1:10000:3",
        "--log",
        "--p",
        "0.5,1,0,0",
    ]);
    assert!(num(&v["rows"][2]["causal"]).abs() < 1e-6);
    // classical part does not depend on the width
    for r in v["rows"].as_array().unwrap() {
        assert!((num(&r["classical"]) - 0.75).abs() < 1e-12);
    }
}

#[test]
fn separation_sweep_follows_the_log_shape() {
    // narrow family, |s|/ℓ² from 1e2 to 1e4: the quantum part grows by
    // (κ²/2π²) ln 10 per decade
    let (v, code) = json(&[
        "sweep",
        "separation",
        "--range",
        "0.01:1:3",
        "--log",
        "--planck-length",
        "0.01",
        "--width",
        "minvar",
    ]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    let k2 = num(&v["config"]["constants"]["kappa_sq"]);
    let step = k2 / (2.0 * PI * PI) * 10f64.ln();
    let q: Vec<f64> = rows.iter().map(|r| num(&r["quantum"])).collect();
    for w in q.windows(2) {
        assert!(((w[1] - w[0]) - step).abs() < 0.05 * step, "{q:?}");
    }
    for r in rows {
        let s = num(&r["parameter"]);
        assert!((num(&r["interval"]) + s).abs() < 1e-12 * s);
    }
}

#[test]
fn state_alpha_sweep_approaches_the_limit() {
    let (limit, _) = json(&["distance", "--p", "1,0,0,0"]);
    let limit = num(&limit["rows"][0]["total"]);
    let (v, code) = json(&["sweep", "state-alpha", "--range", "100:1000000:3", "--log"]);
    assert_eq!(code, 0);
    let dev: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (num(&r["total"]) - limit).abs())
        .collect();
    assert!(dev[0] > dev[1] && dev[1] > dev[2], "{dev:?}");
    assert!(dev[2] < 1e-3 * limit.abs());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ncst(&["distance", "--p", "1,0,0"]).status.code(), Some(2));
    assert_eq!(
        ncst(&["distance", "--p", "1,0,0,0", "--width", "-3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ncst(&["sweep", "width", "--range", "1:2:0"]).status.code(),
        Some(2)
    );
    assert_eq!(ncst(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(
        ncst(&["causal", "--p", "1,0,0,0", "--config", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_ncst"))
        .args(["causal", "--p", "1,0,0,0"])
        .env("NCST_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn starved_quadrature_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("starved.json");
    std::fs::write(&path, r#"{"quadrature": {"max_evals": 15}}"#).unwrap();
    let out = ncst(&[
        "causal",
        "--p",
        "1,0.9,0,0",
        "--width",
        "3",
        "--config",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stdout.is_empty());
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"constants": {"planck_length": 0.5}, "state": {"alpha": 3}, "quadrature": {"seed": 9, "rel_tol": 1e-8}}"#,
    )
    .unwrap();
    let file = path.to_str().unwrap();
    let (v, _) = json(&[
        "distance", "--p", "1,0,0,0", "--config", file, "--seed", "11",
    ]);
    let c = &v["config"];
    assert_eq!(c["constants"]["planck_length"], 0.5);
    assert_eq!(c["state"]["alpha"], 3.0);
    assert_eq!(c["quadrature"]["seed"], 11);
    assert_eq!(c["quadrature"]["rel_tol"], 1e-8);
    let (v, _) = json(&[
        "distance",
        "--p",
        "1,0,0,0",
        "--config",
        file,
        "--kappa-sq",
        "0",
    ]);
    assert_eq!(v["config"]["constants"]["kappa_sq"], 0.0);
    std::fs::write(&path, r#"{"quadrature": {"sed": 1}}"#).unwrap();
    assert_eq!(
        ncst(&["distance", "--p", "1,0,0,0", "--config", file])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_does_not_depend_on_the_worker_count() {
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_ncst"))
            .args([
                "sweep",
                "separation",
                "--range",
                "0.5:4:6",
                "--format",
                "csv",
            ])
            .env("NCST_WORKERS", workers)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}

#[test]
fn gram_suite_reads_family_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("families.json");
    std::fs::write(
        &path,
        r#"[
          [ [ {"v": [1, 0, 0, 0], "center": [0, 0, 0, 0], "width": 20} ],
            [ {"v": [0, 1, 0, 0], "center": [1, 0, 0, 0], "width": 20, "weight": -0.5},
              {"v": [0, 1, 0, 0], "center": [0, 1, 0, 0], "width": 40} ] ],
          [ [ {"v": [0.3, 0.2, 0.1, 0], "center": [0.5, 0, 0, 0], "width": 15} ] ]
        ]"#,
    )
    .unwrap();
    let (v, code) = json(&["verify", "gram", "--families", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    std::fs::write(
        &path,
        r#"[[[{"v": [1, 0, 0, 0], "center": [0, 0, 0, 0], "width": -1}]]]"#,
    )
    .unwrap();
    assert_eq!(
        ncst(&["verify", "gram", "--families", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
