use std::path::PathBuf;
use std::process::{Command, Output};

fn anglekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anglekit"))
        .args(args)
        .env_remove("ANGLEKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("anglekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn wh_spectrum_of_eight() {
    let o = anglekit(&["spectrum", "--construction", "wh", "--t", "0", "--dim", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("construction,D,param,index,eigenvalue"));
    let values: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 8);
    let two_pi = 2.0 * std::f64::consts::PI;
    assert!(values.iter().all(|&v| (-0.2..=two_pi + 0.2).contains(&v)), "{values:?}");
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn wh_lower_symbol_follows_sawtooth() {
    let o = anglekit(&[
        "lower-symbol",
        "--construction",
        "wh",
        "--t",
        "0",
        "--J",
        "100",
        "--dim",
        "160",
        "--gamma-grid",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("J,gamma_or_phi,re,im"));
    let mut checked = 0;
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let g = f[1];
        if (0.5..=2.0 * std::f64::consts::PI - 0.5).contains(&g) {
            assert!((f[2] - g).abs() <= 0.05, "gamma {g}: {}", f[2]);
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn halfcircle_check_passes() {
    let o = anglekit(&["check", "halfcircle", "--dim", "64", "--mode", "cyclic"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with("REPORT")));
    assert!(text.contains("halfcircle/covariance_derivative_vs_minus_sigma"));
}

#[test]
fn commutator_table_header_and_rows() {
    let o = anglekit(&[
        "commutator",
        "--construction",
        "halfcircle",
        "--mode",
        "two-sided",
        "--dims",
        "32,64",
        "--windows",
        "4,8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("construction,D,param,window,defect"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# spectrum run\nconstruction = wh\ndim = 6\nt = 0.25\n").unwrap();
    let o = anglekit(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 7);
    assert!(stdout(&o).contains("wh,6,0.25,"));
    let o = anglekit(&["spectrum", "--config", cfg.to_str().unwrap(), "--dim", "5"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "dim = 8\nwidth = 3\n").unwrap();
    let o = anglekit(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("width"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(anglekit(&["spectrum", "--t", "1.5"]).status.code(), Some(2));
    assert_eq!(anglekit(&["spectrum", "--bogus"]).status.code(), Some(2));
    assert_eq!(anglekit(&["check", "nonsense"]).status.code(), Some(2));
    let o = anglekit(&["lower-symbol", "--construction", "halfcircle"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("halfcircle"));
}

#[test]
fn numerical_failure_exits_three() {
    let o = anglekit(&["lower-symbol", "--construction", "circle", "--dim", "16", "--J", "500"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("lower-symbol"));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_threads() {
    let args = [
        "commutator",
        "--construction",
        "wh",
        "--dims",
        "24",
        "--windows",
        "8,12",
        "--t",
        "0.3",
    ];
    let a = anglekit(&args);
    let b = anglekit(&args);
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "3"]);
    let c = anglekit(&with_threads);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_anglekit"))
        .args(["check", "moments"])
        .env("ANGLEKIT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_schema() {
    let path = scratch("moments.json");
    let o = anglekit(&["check", "moments", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 2);
    for r in recs {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 5);
        for k in ["suite", "invariant", "status", "measured", "tolerance"] {
            assert!(keys.contains(&k));
        }
        assert_eq!(r["status"], "pass");
    }
}
