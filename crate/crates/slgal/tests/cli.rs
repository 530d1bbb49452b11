//! Black-box tests of the command-line binary.

use std::process::Command;

fn slgal(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_slgal"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn eigenvalues_hulthen_json() {
    let out = slgal(&["eigenvalues", "--family", "hulthen", "--params", "1,10,10"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (row, want) in rows.iter().zip([0.350781, 0.850781, 1.350781]) {
        assert!((row["sqrt_lambda"].as_f64().unwrap() - want).abs() < 1e-5);
        assert!(row["verified"].as_bool().unwrap());
        assert!(row["k"].as_i64().is_some());
    }
}

#[test]
fn eigenfunction_value_at_zero() {
    let out = slgal(&[
        "eigenfunction",
        "--family",
        "allen_cahn",
        "--params",
        "0.5",
        "--lambda",
        "0",
        "--x",
        "-10:10:0.1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,psi_re,psi_im");
    let at_zero = lines
        .map(|l| {
            let mut f = l.split(',');
            let x: f64 = f.next().unwrap().parse().unwrap();
            let re: f64 = f.next().unwrap().parse().unwrap();
            (x, re)
        })
        .find(|(x, _)| x.abs() < 1e-9)
        .unwrap();
    assert!((at_zero.1 - 0.25).abs() < 1e-12);
}

#[test]
fn analyze_classification() {
    let out = slgal(&[
        "analyze",
        "--family",
        "allen_cahn",
        "--params",
        "0.3",
        "--lambda",
        "-0.5",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["class"], "ContinuousSpectrum");
}

#[test]
fn analyze_psymbol_table() {
    let out = slgal(&[
        "analyze",
        "--family",
        "hulthen",
        "--params",
        "1,10,10",
        "--lambda",
        "1.8246094",
        "--psymbol",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("point"));
    assert!(lines[3].contains("infinity"));
}

#[test]
fn complex_lambda_and_monodromy() {
    let out = slgal(&[
        "monodromy",
        "--family",
        "hulthen",
        "--params",
        "1,10,10",
        "--lambda",
        "0.7+0.2i",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["triangularizable"], false);
}

#[test]
fn sweep_and_region_csv() {
    let out = slgal(&[
        "sweep",
        "--family",
        "hulthen",
        "--params",
        "1,10",
        "--range",
        "0:0",
        "--grid",
        "11",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("param,branch_k,lambda,sqrt_lambda,bound_lo,bound_hi"));

    let out = slgal(&[
        "region",
        "--family",
        "allen_cahn",
        "--params",
        "0.3",
        "--re",
        "-1:0.2",
        "--im",
        "-0.5:0.5",
        "--grid",
        "10",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lam_re,lam_im,class"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn verify_json() {
    let out = slgal(&[
        "verify",
        "--family",
        "hulthen",
        "--params",
        "1,10,10",
        "--lambda",
        "1.8246094",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passes"], true);
}

#[test]
fn problem_file_source() {
    let dir = std::env::temp_dir().join("slgal_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("problem.json");
    std::fs::write(
        &path,
        r#"{
            "family": "hulthen",
            "params": [1.0, 10.0, 10.0]
        }"#,
    )
    .unwrap();
    let out = slgal(&[
        "eigenvalues",
        "--problem",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,lambda_re,lambda_im,sqrt_lambda,miss"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn error_paths() {
    // domain error: exit 1 with structured JSON on stderr
    let out = slgal(&[
        "eigenvalues",
        "--family",
        "hulthen",
        "--params",
        "1,10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().is_some());
    assert!(err["kind"].as_str().is_some());

    // both problem sources at once
    let out = slgal(&[
        "analyze",
        "--family",
        "hulthen",
        "--params",
        "1,10,10",
        "--problem",
        "x.json",
        "--lambda",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // usage error: exit 2
    let out = slgal(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = [
        "eigenvalues",
        "--family",
        "allen_cahn",
        "--params",
        "0.35",
    ];
    let a = slgal(&args);
    let b = slgal(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
