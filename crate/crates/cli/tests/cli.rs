use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lasso-path"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        stderr(out)
    );
}

#[test]
fn worst_case_pipeline_reports_expected_segments() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "--p", "6", "--out", "inst.json"]);
    assert_exit(&out, 0);

    let out = run(
        dir.path(),
        &["path", "--in", "inst.json", "--exact", "--out", "path.json"],
    );
    assert_exit(&out, 0);
    assert!(stdout(&out).contains("365 segments"));

    let out = run(dir.path(), &["stats", "--path", "path.json"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("segments: 365"));
    assert!(text.contains("kind: exact"));
    assert!(text.contains("complete: true"));
}

#[test]
fn approximate_path_verifies_at_its_own_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(&run(dir.path(), &["gen", "--p", "5", "--out", "inst.json"]), 0);
    let out = run(
        dir.path(),
        &[
            "path", "--in", "inst.json", "--approx", "--eps", "0.1", "--out", "apx.json",
        ],
    );
    assert_exit(&out, 0);

    let out = run(
        dir.path(),
        &[
            "verify", "--in", "inst.json", "--path", "apx.json", "--eps", "0.1", "--out",
            "report.json",
        ],
    );
    assert_exit(&out, 0);
    assert!(stdout(&out).contains("verdict: pass"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert!(report["max_relative_gap"].as_f64().unwrap() <= 0.1 + 1e-9);

    // The same path cannot certify a hundred-fold tighter target.
    let out = run(
        dir.path(),
        &[
            "verify", "--in", "inst.json", "--path", "apx.json", "--eps", "0.001",
        ],
    );
    assert_exit(&out, 1);
    assert!(stdout(&out).contains("verdict: FAIL"));
}

#[test]
fn exact_path_verifies_after_a_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(&run(dir.path(), &["gen", "--p", "4", "--out", "inst.json"]), 0);
    assert_exit(
        &run(
            dir.path(),
            &["path", "--in", "inst.json", "--exact", "--out", "path.json"],
        ),
        0,
    );
    let out = run(
        dir.path(),
        &["verify", "--in", "inst.json", "--path", "path.json"],
    );
    assert_exit(&out, 0);
    assert!(stdout(&out).contains("verdict: pass"));
}

#[test]
fn rank_deficient_design_truncates_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("wide.csv"),
        "x1,x2,x3,y\n1,0.6,0.8,3\n0,0.8,-0.6,1\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "path", "--in", "wide.csv", "--format", "csv", "--exact", "--out", "part.json",
        ],
    );
    assert_exit(&out, 3);
    assert!(stderr(&out).contains("truncated"));
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("part.json")).unwrap())
            .unwrap();
    assert_eq!(written["kind"], "exact");
    assert!(!written["kinks"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "not json").unwrap();
    let out = run(
        dir.path(),
        &["path", "--in", "bad.json", "--exact", "--out", "x.json"],
    );
    assert_exit(&out, 2);
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn random_generation_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        assert_exit(
            &run(
                dir.path(),
                &[
                    "gen", "--random", "--n", "12", "--p", "5", "--seed", "7", "--out", name,
                ],
            ),
            0,
        );
    }
    assert_exit(
        &run(
            dir.path(),
            &[
                "gen", "--random", "--n", "12", "--p", "5", "--seed", "8", "--out", "c.json",
            ],
        ),
        0,
    );
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    let c = std::fs::read(dir.path().join("c.json")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn csv_ingestion_normalizes_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("data.csv"),
        "x1,x2,y\n1,0.5,2\n3,1.5,1\n2,4.0,3\n0,2.0,0\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "path", "--in", "data.csv", "--format", "csv", "--normalize", "--exact", "--out",
            "path.json",
        ],
    );
    assert_exit(&out, 0);
    let out = run(
        dir.path(),
        &[
            "verify", "--in", "data.csv", "--format", "csv", "--normalize", "--path",
            "path.json",
        ],
    );
    assert_exit(&out, 0);
}

#[test]
fn plot_data_emits_one_row_per_kink() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(&run(dir.path(), &["gen", "--p", "3", "--out", "inst.json"]), 0);
    assert_exit(
        &run(
            dir.path(),
            &["path", "--in", "inst.json", "--exact", "--out", "path.json"],
        ),
        0,
    );
    assert_exit(
        &run(
            dir.path(),
            &["plot-data", "--path", "path.json", "--out", "plot.csv"],
        ),
        0,
    );
    let plot = std::fs::read_to_string(dir.path().join("plot.csv")).unwrap();
    let lines: Vec<&str> = plot.lines().collect();
    assert!(lines[0].starts_with("lambda,"));
    assert_eq!(lines[0].split(',').count(), 4);
    let path: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("path.json")).unwrap())
            .unwrap();
    assert_eq!(lines.len() - 1, path["kinks"].as_array().unwrap().len());
}

#[test]
fn generation_past_the_precision_frontier_writes_the_deepest_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "--p", "12", "--out", "deep.json"]);
    assert_exit(&out, 3);
    assert!(stderr(&out).contains("precision exhausted"));
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("deep.json")).unwrap())
            .unwrap();
    assert_eq!(written["x"].as_array().unwrap()[0].as_array().unwrap().len(), 11);
}
