use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonlocal-pencil"))
        .args(args)
        .env_remove("NONLOCAL_PENCIL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fixture_verdicts_and_exit_codes() {
    let ex1 = fixture("example1.cfg");
    let out = run(&["verdict", ex1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("Fredholm"), "{text}");

    let ex2 = fixture("example2.cfg");
    let out = run(&["verdict", ex2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NotFredholm"));

    let out = run(&["asymptotics", fixture("dirichlet.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("bottom line"));
}

#[test]
fn every_command_runs_on_every_fixture() {
    for name in ["example1.cfg", "example2.cfg"] {
        for cmd in ["spectrum", "classify", "condition", "verdict", "asymptotics"] {
            if (name, cmd) == ("example2.cfg", "asymptotics") {
                continue;
            }
            let out = run(&[cmd, fixture(name).to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{cmd} {name}: {}{}", stdout(&out), stderr(&out));
            assert!(!stdout(&out).is_empty());
        }
    }
    let out = run(&["asymptotics", fixture("example2.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("l1 is required"));
}

#[test]
fn malformed_angle_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("example1.cfg")).unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, text.replace("half_opening = \"pi/2\"", "half_opening = \"pi\"")).unwrap();
    let out = run(&["verdict", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("half-opening") && err.contains("line "), "{err}");
    assert!(stdout(&out).is_empty());
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["verdict"]).status.code(), Some(1));
    assert_eq!(run(&["verdict", "/nonexistent/x.cfg"]).status.code(), Some(1));
    let out = run(&["verdict", fixture("example1.cfg").to_str().unwrap(), "--delta-line=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--delta-line"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn json_is_written_and_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("example2.cfg");
    let mut reports = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("r{threads}.json"));
        let out = run(&["spectrum", cfg.to_str().unwrap(), "--threads", threads, "--json", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        reports.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_str(&reports[0]).unwrap();
    assert_eq!(v["command"], "spectrum");
    assert_eq!(v["report_schema_version"], 1);
    assert!(v["section"]["orbits"][0]["ok"]["eigenvalues"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn overrides_reach_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let cfg = fixture("example1.cfg");
    let args = ["verdict", cfg.to_str().unwrap(), "--delta-line", "1e-9", "--seed", "42", "--json", path.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["tolerances"]["delta_line"], 1e-9);
    assert_eq!(v["seed"], 42);
}
