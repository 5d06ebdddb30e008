use narrow_escape_cli::commands::{tolerances, Report};
use narrow_escape_cli::render::EstimateRow;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn geometries() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../geometries")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_narrow-escape"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn geometry(name: &str) -> String {
    geometries().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn asymptotic_sphere_window_total() {
    let o = run(&["asymptotic", "--geometry", &geometry("sphere-window.json"), "--output", "json"]);
    assert!(o.status.success());
    let report: Report = serde_json::from_str(&stdout(&o)).unwrap();
    let Report::Asymptotic(a) = report else { panic!() };
    assert!((a.result.value - 24.798).abs() < 5e-4, "{}", a.result.value);
    let table = stdout(&run(&["asymptotic", "--geometry", &geometry("sphere-window.json")]));
    assert!(table.contains("total") && table.contains("24.798"));
}

#[test]
fn flags_override_the_window() {
    let base = ["asymptotic", "--geometry", &geometry("sphere-window.json"), "--output", "json"];
    let value = |extra: &[&str]| {
        let args: Vec<&str> = base.iter().copied().chain(extra.iter().copied()).collect();
        let Report::Asymptotic(a) = serde_json::from_slice(&run(&args).stdout).unwrap() else {
            panic!()
        };
        a.result.value
    };
    let default = value(&[]);
    assert!(value(&["--eps", "0.02"]) < default);
    assert!(value(&["--delta", "0.1"]) > default);
}

#[test]
fn key_value_geometry_is_accepted() {
    let o = run(&["asymptotic", "--geometry", &geometry("disk.txt"), "--output", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("term,value\n"));
}

#[test]
fn series_json_round_trips() {
    let o = run(&["series", "--geometry", &geometry("annulus.json"), "--output", "json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let report: Report = serde_json::from_str(&text).unwrap();
    let Report::Series(s) = &report else { panic!() };
    assert!((s.mfpt.as_ref().unwrap().value - 13.775).abs() < 1e-2);
    let again = narrow_escape_cli::render::render(&report, narrow_escape_cli::Format::Json).unwrap();
    assert_eq!(again, text);
}

#[test]
fn sweep_csv_matches_json_exactly() {
    let args = |fmt| {
        vec![
            "sweep".to_string(),
            "--geometry".into(),
            geometry("rectangle.json"),
            "--eps".into(),
            "0.2,0.1,0.05".into(),
            "--paths".into(),
            "300".into(),
            "--output".into(),
            fmt,
        ]
    };
    let csv_out = run(&args("csv".into()).iter().map(String::as_str).collect::<Vec<_>>());
    let json_out = run(&args("json".into()).iter().map(String::as_str).collect::<Vec<_>>());
    let text = stdout(&csv_out);
    assert!(text.starts_with("epsilon,mean,stderr,n_absorbed,n_censored,mean_times_epsilon\n"));
    let rows: Vec<EstimateRow> = csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    let Report::Sweep(s) = serde_json::from_slice(&json_out.stdout).unwrap() else { panic!() };
    let from_json: Vec<EstimateRow> = s.rows.iter().map(EstimateRow::from).collect();
    assert_eq!(rows, from_json);
    assert_eq!(rows.len(), 3);
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let args = ["simulate", "--geometry", &geometry("annulus.json"), "--eps", "0.3", "--paths", "200", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    other[7] = "6";
    assert_ne!(run(&other).stdout, a.stdout);
}

#[test]
fn config_run_block_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"type": "rectangle", "params": {"a": 1, "b": 1},
            "window": {"half_width": 0.1, "convention": "arclength"},
            "run": {"n_paths": 150, "seed": 2, "output": "json"}}"#,
    )
    .unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let Report::Simulate(s) = serde_json::from_slice(&run(&["simulate", "--config", &cfg]).stdout).unwrap() else {
        panic!()
    };
    assert_eq!(s.estimate.n_absorbed, 150);
    assert_eq!(s.epsilon, Some(0.1));
    let Report::Simulate(t) =
        serde_json::from_slice(&run(&["simulate", "--config", &cfg, "--paths", "120"]).stdout).unwrap()
    else {
        panic!()
    };
    assert_eq!(t.estimate.n_absorbed, 120);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("terms.csv");
    let p = path.to_string_lossy().into_owned();
    let o = run(&["asymptotic", "--geometry", &geometry("cusp.json"), "--output", "csv", "--out", &p]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("term,value\ncusp-inverse-eps,"));
}

#[test]
fn invalid_geometry_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("swapped.json", r#"{"type":"annulus","params":{"R1":3,"R2":2}}"#),
        ("torus.json", r#"{"type":"torus","params":{}}"#),
        ("broken.json", r#"{"type": "disk""#),
        (
            "wide.json",
            r#"{"type":"annulus","params":{"R1":1,"R2":2},"window":{"half_width":4,"convention":"angular-half-width"}}"#,
        ),
    ] {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        let o = run(&["asymptotic", "--geometry", &p.to_string_lossy()]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn non_contracting_neumann_series_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("thin.json");
    std::fs::write(
        &p,
        r#"{"type":"annulus","params":{"R1":1,"R2":1.05},"window":{"component":"inner","half_width":0.05,"convention":"angular-half-width"}}"#,
    )
    .unwrap();
    let o = run(&["series", "--geometry", &p.to_string_lossy(), "--method", "neumann"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn censored_simulation_exits_with_4() {
    let o = run(&["simulate", "--geometry", &geometry("rectangle.json"), "--max-steps", "10", "--paths", "100"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn compare_reports_pass_and_fail() {
    let o = run(&["compare", "--config", &geometry("sphere-cap.json"), "--paths", "2000"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    // a window this wide is far outside the expansion's range
    let o = run(&["compare", "--geometry", &geometry("annulus.json"), "--eps", "1.5", "--paths", "500"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).trim_end().ends_with("FAIL"));
}

#[test]
fn usage_errors_exit_with_1() {
    assert_eq!(run(&["asymptotic"]).status.code(), Some(1));
    let o = run(&["simulate", "--geometry", &geometry("annulus.json"), "--start", "1,2,3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["series", "--geometry", &geometry("cusp.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tolerance_table_covers_every_case() {
    let t = tolerances();
    for case in ["sphere-cap", "annulus", "rectangle-corner", "cusp", "sphere-window", "smooth"] {
        assert!(t[case].relative > 0.0, "{case}");
    }
    assert_eq!(t["rectangle-corner"].relative, 0.07);
}
