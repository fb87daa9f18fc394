use std::process::{Command, Output};

fn qhr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhr-verify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_and_module_filter() {
    let all = qhr(&["list"]);
    assert!(all.status.success());
    assert!(stdout(&all).lines().count() >= 12);
    let cft = stdout(&qhr(&["list", "--module", "cft"]));
    assert!(!cft.is_empty());
    assert!(cft.lines().all(|l| l.split_whitespace().nth(1) == Some("cft")));
    let none = qhr(&["list", "--module", "nonexistent"]);
    assert!(none.status.success());
    assert!(stdout(&none).is_empty());
}

#[test]
fn passing_run_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = qhr(&["run", "b2-theta-long", "--order", "4", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["reports"][0]["parameters"]["order"], 4);
    assert_eq!(v["summary"]["pass"], 1);
}

#[test]
fn failing_run_exits_one() {
    let o = qhr(&["run", "b2-theta-mixed", "--order", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn numeric_overrides_reach_the_suite() {
    let o = qhr(&["run", "d4-s-matrix", "--order", "40", "--tau", "0.1,1.5", "--tol", "1e-6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(qhr(&["run", "no-such-suite"]).status.code(), Some(2));
    // exact suites have no tau
    assert_eq!(qhr(&["run", "b2-theta-long", "--tau", "0,1"]).status.code(), Some(2));
    assert_eq!(qhr(&["run", "d4-s-matrix", "--tau", "0,-1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[no-such-suite]\norder = 3\n").unwrap();
    assert_eq!(qhr(&["all", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qhr(&["all", "--config", "/nonexistent/config.toml"]).status.code(), Some(2));
}

#[test]
fn set_overrides_any_parameter() {
    let o = qhr(&["run", "numerator-case", "--set", "x=2,3", "--set", "betas=1,0;0,1", "--set", "order=4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let bad = qhr(&["run", "numerator-case", "--set", "order=many"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(qhr(&["run", "numerator-case", "--set", "novalue"]).status.code(), Some(2));
}
