use std::fs;
use std::path::Path;

use glucomem::cli::run_with_output;

const SCENARIO_A: &str =
    r#"{"dimensionless":{"alpha":0.01,"beta":1.15,"gammaE1":10,"gammaS1":10,"eta":1,"mu":1}}"#;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("glucomem").chain(args.iter().copied());
    let code = run_with_output(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("c.json");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn steady_writes_one_row_per_node_and_a_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SCENARIO_A);
    let out = dir.path().join("s.csv");
    let plot = dir.path().join("s.svg");
    let (code, stdout, _) = run(&[
        "steady",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("steady:"), "{stdout}");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# glucomem steady alpha=0.01"));
    assert!(text.lines().nth(1) == Some("X,u,v,w"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[200], ["1", "1", "1", "0"]);
    let u0: f64 = rows[0][1].parse().unwrap();
    assert!((u0 - 0.9528).abs() < 0.002);
    let svg = fs::read_to_string(&plot).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn glucose_table_vim_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t1.csv");
    let (code, _, err) = run(&["tables", "--which", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&out).unwrap();
    let first = data_rows(&text).into_iter().next().unwrap();
    assert_eq!(first[0], "0");
    let vim: f64 = first[2].parse().unwrap();
    assert!((vim - 0.9528).abs() < 5e-4, "{vim}");
    assert_eq!(text.lines().filter(|l| l.starts_with("mean,")).count(), 3);
}

#[test]
fn agm_metadata_reports_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SCENARIO_A);
    let out = dir.path().join("a.csv");
    let (code, stdout, _) = run(&[
        "closed-form",
        "--method",
        "agm",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let meta = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let m: f64 = meta
        .split_whitespace()
        .find_map(|t| t.strip_prefix("m="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((m - 0.3133).abs() < 5e-4);
    assert!(stdout.contains("m=0.3133"), "{stdout}");
}

#[test]
fn vim_transient_requires_tau() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SCENARIO_A);
    let out = dir.path().join("v.csv");
    let args = [
        "closed-form",
        "--method",
        "vim-transient",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ];
    let (code, _, err) = run(&args);
    assert_eq!(code, 1);
    assert!(err.contains("--tau"));
}

#[test]
fn transient_samples_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"dimensionless":{"alpha":0.01,"beta":1.15,"gammaE1":10,"gammaS1":10,"eta":1,"mu":1},"solver":{"n":21}}"#,
    );
    let out = dir.path().join("t.csv");
    let (code, _, err) = run(&[
        "transient",
        "--config",
        &cfg,
        "--tau-end",
        "0.05",
        "--samples",
        "0,0.05",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1), Some("tau,X,u,v,w"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 42);
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[41][0], "0.05");
}

#[test]
fn sweep_and_sensitivity_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"dimensionless":{"alpha":0.01,"beta":1.15,"gammaE1":10,"gammaS1":10,"eta":1,"mu":1},"solver":{"n":41}}"#,
    );
    let sweep = dir.path().join("sw.csv");
    let (code, _, err) = run(&[
        "sweep",
        "--param",
        "k",
        "--values",
        "0.5,1,2",
        "--species",
        "u",
        "--config",
        &cfg,
        "--out",
        sweep.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&sweep).unwrap();
    assert_eq!(text.lines().nth(1), Some("k,X,u"));
    assert_eq!(data_rows(&text).len(), 3 * 41);

    let sens = dir.path().join("se.csv");
    let (code, _, err) = run(&[
        "sensitivity",
        "--config",
        &cfg,
        "--target",
        "u",
        "--out",
        sens.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&sens).unwrap();
    assert_eq!(text.lines().nth(1), Some("parameter,share_percent"));
    let rows = data_rows(&text);
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(names, ["alpha", "beta", "gammaE1", "gammaS1", "eta", "mu"]);
    let total: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
    assert!((total - 100.0).abs() < 0.1);
}

#[test]
fn usage_and_config_errors_exit_one() {
    let (code, _, err) = run(&["bogus"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let cfg = write_config(
        dir.path(),
        r#"{"dimensionless":{"alpha":-1,"beta":1.15,"gammaE1":10,"gammaS1":10,"eta":1,"mu":1}}"#,
    );
    let (code, _, err) = run(&["steady", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("alpha must be positive"), "{err}");
    assert!(!out.exists());

    let cfg = write_config(dir.path(), "{\n \"dimensionless\": [\n");
    let (code, _, err) = run(&["steady", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line"), "{err}");

    let (code, _, err) = run(&[
        "sweep", "--param", "zeta", "--values", "1", "--config", &cfg, "--out", "o.csv",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("gammaE1"), "{err}");
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SCENARIO_A);
    let bad = dir.path().join("missing").join("s.csv");
    let (code, _, err) = run(&[
        "steady",
        "--config",
        &cfg,
        "--grid",
        "21",
        "--out",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("missing"), "{err}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SCENARIO_A);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let (code, _, _) = run(&["steady", "--config", &cfg, "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("conf-out.csv");
    let text = format!(
        r#"{{"dimensionless":{{"alpha":0.01,"beta":1.15,"gammaE1":10,"gammaS1":10,"eta":1,"mu":1}},
            "solver":{{"n":11}},"output":{{"csv":{:?}}}}}"#,
        target.to_str().unwrap()
    );
    let cfg = write_config(dir.path(), &text);
    let (code, _, err) = run(&["steady", "--config", &cfg]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(data_rows(&fs::read_to_string(&target).unwrap()).len(), 11);

    let bare = write_config(dir.path(), SCENARIO_A);
    let (code, _, _) = run(&["steady", "--config", &bare]);
    assert_eq!(code, 1);
}
