use std::path::Path;
use std::process::{Command, Output};

fn flatband(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatband"))
        .args(args)
        .env_remove("FLATBAND_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn solve_uncoupled() {
    let out = flatband(&["solve", "--omega", "0", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(value(&text, "psi_star"), 0.0);
    assert_eq!(value(&text, "population"), 0.0);
    assert!(text.contains("n_max_used="));
}

#[test]
fn solve_superradiant() {
    let out = flatband(&["solve", "--omega", "0.8", "--delta", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(value(&stdout(&out), "psi_star") > 0.0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["solve", "--omega", "-1", "--delta", "1"][..],
        &["solve", "--omega", "abc"],
        &["solve", "--bogus"],
        &["oracle", "--sites", "4"],
        &["oracle", "--sites", "0"],
        &["boundary", "--delta-values", "1,0"],
        &["boundary", "--tol", "0"],
        &["boundary", "--workers", "0"],
        &["popmap", "--omega-count", "1"],
        &["popmap", "--format", "csv+pgm"],
        &["frobnicate"],
    ] {
        let out = flatband(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn oracle_examples_pass() {
    let out = flatband(&["oracle", "--sites", "2", "--delta", "0", "--omega", "0.7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("result PASS\n"));
    let out = flatband(&["oracle", "--sites", "2", "--omega", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solver_failure_exits_one() {
    // At 25 photons and Ω = 6 the truncated mean field is no longer
    // displacement invariant, so the Δ = 0 checks fail.
    let out = flatband(&["oracle", "--sites", "1", "--omega", "6", "--n-max-site", "25"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn boundary_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = flatband(&[
        "boundary",
        "--delta-values",
        "50,20",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta_over_omega12,omega_c_over_omega12,status");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2.0000000000000000e1,"));
    assert!(lines[1].ends_with(",ok"));
    assert!(lines[2].starts_with("5.0000000000000000e1,"));
}

#[test]
fn boundary_log_axis_reaches_the_wide_band_limit() {
    let out = flatband(&["boundary", "--delta-min", "1", "--delta-max", "100", "--delta-count", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0].parse::<f64>().unwrap(), 100.0);
    assert!((fields[1].parse::<f64>().unwrap() - 0.5).abs() < 0.1);
    assert_eq!(fields[2], "ok");
}

#[test]
fn popmap_csv_and_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("map.csv");
    let out = flatband(&[
        "popmap",
        "--omega-max",
        "1",
        "--omega-count",
        "5",
        "--delta-max",
        "10",
        "--delta-count",
        "3",
        "--format",
        "csv+pgm",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega_over_omega12,delta_over_omega12,population,psi_star");
    assert_eq!(lines.len(), 1 + 15);
    for line in &lines[1..] {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        if f[0] == 0.0 {
            assert_eq!(f[2], 0.0);
        }
    }
    let pgm = std::fs::read(Path::new(&csv).with_extension("pgm")).unwrap();
    let header = b"P5\n5 3\n255\n";
    assert_eq!(&pgm[..header.len()], header);
    assert_eq!(pgm.len(), header.len() + 15);
    // Ω = 0 column is black.
    for row in 0..3 {
        assert_eq!(pgm[header.len() + row * 5], 0);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# point\nomega = 0.8\ndelta = 10\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = flatband(&["--config", cfg, "solve"]);
    assert!(value(&stdout(&from_file), "psi_star") > 0.0);
    let overridden = flatband(&["solve", "--config", cfg, "--omega", "0"]);
    assert_eq!(value(&stdout(&overridden), "psi_star"), 0.0);

    std::fs::write(dir.path().join("bad.conf"), "colour = red\n").unwrap();
    let bad = flatband(&["--config", dir.path().join("bad.conf").to_str().unwrap(), "solve"]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = flatband(&["--config", "/nonexistent/flatband.conf", "solve"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn environment_sets_default_workers() {
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_flatband"));
        cmd.args(["boundary", "--delta-values", "5,30"]);
        match env {
            Some(v) => cmd.env("FLATBAND_WORKERS", v),
            None => cmd.env_remove("FLATBAND_WORKERS"),
        };
        cmd.output().unwrap()
    };
    let bad = run(Some("zero"));
    assert_eq!(bad.status.code(), Some(2));
    let one = run(Some("1"));
    let three = run(Some("3"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(one.stdout, run(None).stdout);
}

#[test]
fn help_lists_defaults() {
    let out = flatband(&["popmap", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[default: 40]"));
    assert!(text.contains("csv+pgm"));
}
