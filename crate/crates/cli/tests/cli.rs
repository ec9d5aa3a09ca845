use std::path::Path;
use std::process::{Command, Output};

fn treemax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treemax"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn norm_of_a_ball_indicator() {
    let dir = tempfile::tempdir().unwrap();
    // chi_{B_1} on k = 2: four vertices, ||.||_{2,1} = 2 * 4^(1/2) = 4
    let f = write(dir.path(), "ball.csv", "norm,value\n0,1\n1,1\n");
    let o = treemax(&["norm", "--radial", &f, "--p", "2", "--s", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4.00000000000000e0");

    let o = treemax(&["norm", "--radial", &f, "--p", "2", "--s", "inf", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "2.00000000000000e0");
    assert_eq!(v["s"], "inf");
}

#[test]
fn maximal_of_a_dirac_mass() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dirac.csv", "norm,value\n0,1\n");
    let o = treemax(&["maximal", "--radial", &f, "--gamma", "1", "--m-max", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    // |B_0| = 1, |B_1| = 4, |B_2| = 10
    assert_eq!(lines[0], "norm,value,argmax_radius");
    assert_eq!(lines[1], "0,1.00000000000000e0,0");
    assert_eq!(lines[2], "1,2.50000000000000e-1,1");
    assert_eq!(lines[3], "2,1.00000000000000e-1,2");

    let g = write(dir.path(), "dirac_finite.csv", "path,value\n/,1\n");
    let o = treemax(&["maximal", "--finite", &g, "--gamma", "1", "--radius", "1", "--exact"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.csv", "norm,value\n0,1\n1,1\n");

    let bad = treemax(&["norm", "--radial", &f, "--p", "0.5"]);
    assert_eq!(bad.status.code(), Some(2));

    // g(n) = f(n) k^(n/2) grows once the tail is flat
    let divergent = ["norm", "--radial", &f, "--p", "2", "--surrogate", "--tail-log-ratio", "0"];
    assert_eq!(treemax(&divergent).status.code(), Some(4));
    let mut allowed = divergent.to_vec();
    allowed.push("--expect-divergence");
    let o = treemax(&allowed);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("divergent:"));

    let decaying = ["norm", "--radial", &f, "--p", "2", "--surrogate", "--tail-log-ratio", "-1"];
    assert!(treemax(&decaying).status.success());

    let huge = write(dir.path(), "far.csv", "path,value\n/,1\n");
    let o = treemax(&["maximal", "--finite", &huge, "--gamma", "0.5", "--radius", "40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"gamma": [0.5], "n": 5, "t": 2}"#);
    let o = treemax(&["--config", &cfg, "experiment", "delta-divergence"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 1 + 6);

    let o = treemax(&["--config", &cfg, "experiment", "delta-divergence", "--n", "3"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 4);

    let bad = write(dir.path(), "bad.json", r#"{"gamma": [0.5], "nonsense": 1}"#);
    let o = treemax(&["--config", &bad, "experiment", "delta-divergence"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn region_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let o = treemax(&["region", "--gamma", "0.75", "--grid", "40", "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    let csv = std::fs::read_to_string(dir.path().join("fig.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 41 * 41);
    assert!(csv.lines().any(|l| l.contains(",Unknown,Remark: critical segment")));
}

#[test]
fn failed_checks_exit_with_one() {
    // a two-member family cannot show a stable running sup
    let o = treemax(&["experiment", "radial-bounded", "--gamma", "0.25", "--family-size", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}
