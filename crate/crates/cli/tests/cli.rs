use std::process::{Command, Output};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const ROUNDED_TWO_PERIOD: &[&str] = &[
    "--schedule",
    "two-period",
    "--theta0",
    "0.785398",
    "--theta1",
    "0.523599",
    "--alpha",
    "0.707107,0",
    "--beta",
    "0,0.707107",
];

#[test]
fn simulate_two_period_csv() {
    let mut args = vec!["simulate"];
    args.extend_from_slice(ROUNDED_TWO_PERIOD);
    args.extend_from_slice(&["--t", "500", "--format", "csv"]);
    let o = qwalk(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("position,probability"));
    let rows: Vec<(i64, f64)> = lines
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 501);
    assert!(rows.iter().all(|(x, _)| x % 2 == 0));
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-12, "{total}");
}

#[test]
fn simulate_at_time_zero() {
    let o = qwalk(&["simulate", "--t", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "position,probability\n0,1.0\n");
}

#[test]
fn simulate_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.json");
    let o = qwalk(&[
        "simulate",
        "--t",
        "10",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["time"], 10);
    assert_eq!(v["entries"].as_array().unwrap().len(), 11);
}

#[test]
fn forbidden_angle_exits_two() {
    let o = qwalk(&["simulate", "--theta0", "1.570796"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("theta0") && err.contains("pi/2"), "{err}");
}

#[test]
fn density_grid_for_symmetric_two_period() {
    let mut args = vec!["density", "--theorem", "1"];
    args.extend_from_slice(ROUNDED_TWO_PERIOD);
    let o = qwalk(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 1001);
    let centre = rows[500];
    assert!(centre.0.abs() < 1e-12);
    assert!((centre.1 - 1.0 / std::f64::consts::PI).abs() < 1e-5);
    let (xmax, _) = rows
        .iter()
        .copied()
        .fold((0.0, f64::MIN), |b, r| if r.1 > b.1 { r } else { b });
    assert!(xmax.abs() > 0.69, "maximum at {xmax}");
}

#[test]
fn phase_theorems_agree_at_zero_phase() {
    let f2 = qwalk(&[
        "density",
        "--schedule",
        "one-period",
        "--theorem",
        "2",
        "--w0",
        "0",
        "--a",
        "0.48,0.36",
        "--b",
        "0,0.8",
        "--c",
        "0,0.8",
        "--d",
        "0.48,-0.36",
        "--alpha",
        "0.6,0",
        "--beta",
        "0,0.8",
    ]);
    let f3 = qwalk(&[
        "density",
        "--schedule",
        "one-period",
        "--theorem",
        "3",
        "--w0",
        "0",
        "--a",
        "0.48,0.36",
        "--b",
        "0,0.8",
        "--c",
        "0,0.8",
        "--d",
        "0.48,-0.36",
        "--alpha",
        "0.6,0",
        "--beta",
        "0,0.8",
    ]);
    assert!(f2.status.success(), "{}", stderr(&f2));
    assert_eq!(f2.stdout, f3.stdout);
}

#[test]
fn equal_angles_exit_two() {
    let o = qwalk(&["density", "--theorem", "1", "--theta0", "0.5", "--theta1", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_checks_pass() {
    for args in [
        vec!["verify", "--check", "case1-reduction"],
        vec!["verify", "--check", "theorem3-equiv"],
        vec!["verify", "--check", "spectral"],
        vec!["verify", "--check", "convergence", "--t-list", "100,200,500"],
    ] {
        let o = qwalk(&args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["pass"], true, "{args:?}");
    }
}

#[test]
fn case1_reduction_error_is_tiny() {
    let o = qwalk(&["verify", "--check", "case1-reduction"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["max_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn convergence_final_ks_below_threshold() {
    let o = qwalk(&["verify", "--check", "convergence", "--t-list", "100,200,500"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert!(records[2]["ks"].as_f64().unwrap() < 0.05);
}

#[test]
fn failed_verification_exits_one() {
    // Skewed initial state measured against the symmetrized density.
    let o = qwalk(&[
        "verify",
        "--check",
        "convergence",
        "--theorem",
        "konno",
        "--alpha",
        "1,0",
        "--t-list",
        "100,200,500",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn unknown_check_exits_two() {
    let o = qwalk(&["verify", "--check", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--check"));
}

#[test]
fn spectrum_and_moments_csv() {
    let o = qwalk(&["spectrum", "--points", "64"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("k,re_lambda0,im_lambda0,re_lambda1,im_lambda1,h0,h1\n"));
    assert_eq!(text.lines().count(), 65);

    let o = qwalk(&["moments", "--t", "500"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let second: Vec<f64> = text
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(second[0], 2.0);
    assert!((second[1] - second[2]).abs() < 1e-3);
}

#[test]
fn config_file_merges_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"schedule":"case2","theta":0.4,"kappa":3.141592653589793,"t":40,"alpha":[0.6,0],"beta":[0,0.8]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = qwalk(&["simulate", "--config", p, "--t", "12", "--print-config"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let printed = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&printed).unwrap();
    assert_eq!(v["t"], 12);
    assert_eq!(v["kappa"], std::f64::consts::PI);

    let again = dir.path().join("again.json");
    std::fs::write(&again, &printed).unwrap();
    let o2 = qwalk(&["simulate", "--config", again.to_str().unwrap(), "--print-config"]);
    assert_eq!(stdout(&o2), printed);

    let a = qwalk(&["simulate", "--config", p, "--t", "12"]);
    let b = qwalk(&[
        "simulate",
        "--schedule",
        "case2",
        "--theta",
        "0.4",
        "--kappa",
        "3.141592653589793",
        "--t",
        "12",
        "--alpha",
        "0.6,0",
        "--beta",
        "0,0.8",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_config_field_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"thetta0": 0.5}"#).unwrap();
    let o = qwalk(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("thetta0"));
}

#[test]
fn output_is_byte_stable() {
    let a = qwalk(&["verify", "--check", "spectral"]);
    let b = qwalk(&["verify", "--check", "spectral"]);
    assert_eq!(a.stdout, b.stdout);
}
