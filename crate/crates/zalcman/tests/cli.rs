//! End-to-end checks of the command-line surface: output shapes, exit
//! codes, and byte-for-byte determinism.

use std::process::{Command, Output};

fn zalcman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zalcman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bound_prints_value_and_branch() {
    let out = zalcman(&[
        "bound", "--class", "R", "--beta", "0", "-n", "2", "-m", "2", "--lambda", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1.3333333333333333"), "got: {text}");
    assert!(text.contains("branch=second"), "got: {text}");
}

#[test]
fn bound_emits_csv_and_json() {
    let out = zalcman(&[
        "bound", "--class", "starlike_hull", "--alpha", "0", "-n", "2", "-m", "2", "--lambda",
        "1", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "class,alpha,beta,n,m,lambda,bound,branch,sharpness,best_found,gap"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("starlike_hull,"), "row: {row}");
    assert!(row.contains("first"), "row: {row}");

    let out = zalcman(&[
        "bound", "--class", "starlike_hull", "--alpha", "0", "-n", "2", "-m", "2", "--lambda",
        "1", "--format", "json",
    ]);
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(text.trim()).expect("valid json");
    assert_eq!(v["class"], "starlike_hull");
    assert_eq!(v["branch"], "first");
    assert!((v["bound"].as_f64().unwrap() - 3.0).abs() < 1e-15);
}

#[test]
fn extremal_dumps_koebe() {
    let out = zalcman(&["extremal", "--id", "koebe", "-N", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1,2,3,4,5");
}

#[test]
fn extremal_requires_parameters() {
    let out = zalcman(&["extremal", "--id", "f1_starlike", "-N", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--alpha"));
}

#[test]
fn extremal_mixture_via_flags() {
    // Two equal parts at angles 3pi/2 and pi/2 of the Koebe-type extremal:
    // a_2 cancels, a_3 = -3.
    let out = zalcman(&[
        "extremal",
        "--id",
        "mixture",
        "--base",
        "f1_starlike",
        "--alpha",
        "0",
        "--weights",
        "0.5,0.5",
        "--angles",
        "4.71238898038469,1.5707963267948966",
        "-N",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let a3: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    let re: f64 = a3[1].parse().unwrap();
    assert!((re + 3.0).abs() < 1e-12, "a3 = {re}");
}

#[test]
fn unknown_flags_are_rejected() {
    let out = zalcman(&["bound", "--clazz", "R"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_class_is_usage_error() {
    let out = zalcman(&[
        "bound", "--class", "starlike", "-n", "2", "-m", "2", "--lambda", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown class"));
}

#[test]
fn domain_hole_maps_to_exit_three() {
    let out = zalcman(&[
        "bound", "--class", "typically_real", "-n", "2", "-m", "2", "--lambda", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("LAMBDA_BELOW_ONE"));
}

#[test]
fn table_is_byte_identical_and_marks_holes() {
    let args = [
        "table",
        "--class",
        "F2",
        "--beta",
        "0",
        "--n-min",
        "2",
        "--n-max",
        "3",
        "--m-min",
        "2",
        "--m-max",
        "4",
        "--lambdas",
        "1,2,3",
        "--format",
        "csv",
    ];
    let a = zalcman(&args);
    let b = zalcman(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains(",n/a,"), "no n/a cells in:\n{text}");
    // (2,3) at lambda 3 is covered: mu threshold 6/4 = 1.5 <= 3.
    assert!(text.lines().any(|l| l.starts_with("F2,") && l.contains(",only,")));
}

#[test]
fn verify_suite_emits_json_lines_and_exit_zero() {
    let out = zalcman(&[
        "verify",
        "--suite",
        "hermitian",
        "--measures",
        "60",
        "--zseqs",
        "4",
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut count = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("json line");
        assert_eq!(v["passed"], true, "failing record: {line}");
        count += 1;
    }
    assert!(count >= 6, "expected a handful of records, got {count}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 failed"));
}

#[test]
fn verify_sharpness_and_continuity_pass() {
    let out = zalcman(&["verify", "--suite", "sharpness"]);
    assert_eq!(out.status.code(), Some(0));
    let out = zalcman(&["verify", "--suite", "continuity"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_oracle_with_small_grid() {
    let out = zalcman(&[
        "verify",
        "--suite",
        "oracle",
        "--grid-angles",
        "181",
        "--grid-weights",
        "26",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_member_from_measure_file() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("zalcman-measure-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"[{"w": 0.5, "t": 0.0}, {"w": 0.5, "t": 3.141592653589793}]"#,
    )
    .unwrap();
    let out = zalcman(&[
        "verify",
        "--suite",
        "member",
        "--measure-file",
        path.to_str().unwrap(),
        "--class",
        "typically_real",
        "-n",
        "2",
        "-m",
        "2",
        "--lambda",
        "1",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.lines().count() >= 2, "member records:\n{text}");
}

#[test]
fn search_single_cell_is_deterministic() {
    let args = [
        "search",
        "--class",
        "starlike_hull",
        "--alpha",
        "0",
        "-n",
        "2",
        "-m",
        "2",
        "--lambda",
        "2",
        "--atoms",
        "4",
        "--restarts",
        "40",
        "--max-iters",
        "250",
        "--seed",
        "42",
        "--format",
        "json",
    ];
    let a = zalcman(&args);
    let b = zalcman(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    let best = v["best_found"].as_f64().unwrap();
    assert!((best - 5.0).abs() <= 1e-5, "best {best}");
    assert!(v["gap"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn search_sweep_rows_cover_grid() {
    let out = zalcman(&[
        "search", "--class", "R", "--beta", "0", "-n", "2", "-m", "2", "--lambdas", "0,2",
        "--atoms", "3", "--restarts", "30", "--max-iters", "200", "--seed", "7", "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3); // header + 2 rows
    for row in text.lines().skip(1) {
        assert!(row.starts_with("R,"), "row: {row}");
    }
}
