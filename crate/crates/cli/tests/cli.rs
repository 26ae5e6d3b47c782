use std::io::{BufRead, BufReader};
use std::path::PathBuf;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_haulplan"))
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/demo_scenario.json")
}

#[test]
fn validate_accepts_demo() {
    let out = bin().args(["validate", "--scenario"]).arg(fixture()).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("4 routes"));
}

#[test]
fn scenario_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": 9}"#).unwrap();
    let out = bin().args(["validate", "--scenario"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported_schema"));

    std::fs::write(&bad, "not json").unwrap();
    let out = bin().args(["solve", "--scenario"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_with_one() {
    let out = bin()
        .args(["solve", "--scenario", "/nonexistent/scenario.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_prints_result_json_without_out() {
    let out = bin()
        .args(["solve", "--sample-step", "10", "--scenario"])
        .arg(fixture())
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["routes"].as_array().unwrap().len(), 4);
    assert_eq!(v["sample_step_m"], 10.0);
}

#[test]
fn solve_against_running_service() {
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let mut server = bin()
        .args(["serve", "--port", &port.to_string()])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(server.stderr.take().unwrap())
        .read_line(&mut line)
        .unwrap();
    assert!(line.contains("listening"), "{line}");

    let url = format!("http://127.0.0.1:{port}");
    let local = bin().args(["solve", "--scenario"]).arg(fixture()).output().unwrap();
    let remote = bin()
        .args(["--server", &url, "solve", "--scenario"])
        .arg(fixture())
        .output()
        .unwrap();
    server.kill().unwrap();
    server.wait().unwrap();
    assert!(remote.status.success(), "{}", String::from_utf8_lossy(&remote.stderr));
    assert_eq!(local.stdout, remote.stdout);
}
