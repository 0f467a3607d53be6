use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dodoor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dodoor"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.toml");
    let out = dir.join("out");
    let text = format!("output_dir = {:?}\n{body}", out.display().to_string());
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const SMALL: &str = r#"
policies = ["dodoor"]
topology = "scaled:8"
qps = [40.0]
seeds = [3]
[workload]
generator = "functionbench"
count = 300
"#;

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count()
        - 1
}

#[test]
fn run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
policies = ["dodoor"]
topology = "scaled:20"
qps = [100.0]
seeds = [1]
[workload]
generator = "functionbench"
count = 5000
"#,
    );
    let o = dodoor(&["run", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = dir.path().join("out");
    for f in [
        "summary.csv",
        "utilization.csv",
        "utilization_nodes.csv",
        "config.toml",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let cell = out.join("dodoor_q100_s1");
    for f in ["decisions.csv", "messages.csv", "tasks.csv", "config.toml"] {
        assert!(cell.join(f).is_file(), "{f}");
    }
    assert_eq!(data_rows(&cell.join("decisions.csv")), 5000);
    assert_eq!(data_rows(&cell.join("tasks.csv")), 5000);
    let echo = fs::read_to_string(cell.join("config.toml")).unwrap();
    assert!(echo.contains("scaled:20") && echo.contains("functionbench"));
    assert_eq!(data_rows(&out.join("summary.csv")), 1);
}

#[test]
fn decision_logs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let read = || {
        let o = dodoor(&["run", "--config", &cfg, "--parallel", "2"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        fs::read(dir.path().join("out/dodoor_q40_s3/decisions.csv")).unwrap()
    };
    let a = read();
    let b = read();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn seed_and_out_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let other = dir.path().join("elsewhere");
    let o = dodoor(&[
        "run",
        "--config",
        &cfg,
        "--seed",
        "9",
        "--out",
        other.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(other.join("dodoor_q40_s9/decisions.csv").is_file());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn missing_trace_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
policies = ["random"]
topology = "scaled:8"
[workload]
trace = "no-such-trace.csv"
"#,
    );
    let o = dodoor(&["run", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no-such-trace.csv"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.toml");
    assert_eq!(
        code(&dodoor(&["run", "--config", missing.to_str().unwrap()])),
        3
    );
    let bad = write_config(dir.path(), "policies = [\"sparrow\"]\n");
    assert_eq!(code(&dodoor(&["run", "--config", &bad])), 1);
    assert_eq!(code(&dodoor(&["frobnicate"])), 1);
    assert_eq!(code(&dodoor(&["--help"])), 0);
    let one = write_config(dir.path(), SMALL);
    assert_eq!(code(&dodoor(&["compare", "--config", &one])), 1);
    assert_eq!(code(&dodoor(&["validate", "--config", &one])), 0);
    assert_eq!(code(&dodoor(&["validate"])), 1);
}

#[test]
fn compare_reports_deltas_against_baselines() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
policies = ["dodoor", "pot"]
topology = "scaled:8"
qps = [40.0]
seeds = [1, 2]
[workload]
generator = "functionbench"
count = 400
"#,
    );
    let o = dodoor(&["compare", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = dir.path().join("out");
    let joined = fs::read_to_string(out.join("comparison.csv")).unwrap();
    let header = joined.lines().next().unwrap();
    assert!(header.contains("scheduler_handled_messages_delta_pct"));
    assert!(header.contains("makespan_p95_delta_pct"));
    assert_eq!(joined.lines().count(), 3);
    // Per decision the cached-load policy handles 2 messages plus amortized
    // cache traffic; the probing baseline handles 6.
    let deltas = fs::read_to_string(out.join("comparison_deltas.csv")).unwrap();
    let msg_rows: Vec<&str> = deltas
        .lines()
        .filter(|l| l.contains(",scheduler_handled_messages,"))
        .collect();
    assert_eq!(msg_rows.len(), 2);
    for row in msg_rows {
        let pct: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(pct < 0.0, "{row}");
    }
    // One summary row per cell.
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
}

#[test]
fn alpha_sweep_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
policies = ["dodoor", "random"]
topology = "scaled:8"
qps = [40.0]
seeds = [1]
format = "json"
[workload]
generator = "functionbench"
count = 200
[sweep]
duration_weight = [0.0, 0.25, 0.5, 0.75, 1.0]
"#,
    );
    let o = dodoor(&["compare", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = dir.path().join("out");
    let joined = fs::read_to_string(out.join("comparison.csv")).unwrap();
    let subjects: Vec<&str> = joined
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(
        subjects,
        [
            "dodoor_a0_q40_s1",
            "dodoor_a0.25_q40_s1",
            "dodoor_a0.5_q40_s1",
            "dodoor_a0.75_q40_s1",
            "dodoor_a1_q40_s1"
        ]
    );
    assert!(out.join("report.json").is_file());
}

#[test]
fn gen_trace_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let azure = dir.path().join("azure.csv");
    let o = dodoor(&[
        "gen-trace",
        "--generator",
        "azure-like",
        "--count",
        "4000",
        "--seed",
        "1",
        "--out",
        azure.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let echo = String::from_utf8_lossy(&o.stdout);
    assert!(echo.contains("seed=1") && echo.contains("count=4000"));
    assert_eq!(data_rows(&azure), 4000);
    let o = dodoor(&[
        "validate",
        "--trace",
        azure.to_str().unwrap(),
        "--topology",
        "table2-100",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let fb = dir.path().join("nested/fb.csv");
    let o = dodoor(&[
        "gen-trace",
        "--generator",
        "functionbench",
        "--count",
        "100000",
        "--qps",
        "100",
        "--out",
        fb.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(data_rows(&fb), 100_000);

    let zero = dir.path().join("zero.csv");
    let o = dodoor(&[
        "gen-trace",
        "--generator",
        "functionbench",
        "--count",
        "0",
        "--out",
        zero.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(!zero.exists());
}

#[test]
fn trace_file_workload_keeps_recorded_arrivals() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let o = dodoor(&[
        "gen-trace",
        "--generator",
        "functionbench",
        "--count",
        "50",
        "--seed",
        "4",
        "--qps",
        "20",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let cfg = write_config(
        dir.path(),
        r#"
policies = ["random"]
topology = "scaled:8"
[workload]
trace = "t.csv"
"#,
    );
    let o = dodoor(&["run", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(data_rows(&dir.path().join("out/random_s0/tasks.csv")), 50);
}
