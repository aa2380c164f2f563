use std::path::Path;
use std::process::{Command, Output};

fn proxmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn exact_worked_example() {
    let o = proxmatch(&["exact", "--op", "E", "--gaps", "0.1,0.2,0.3,0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("op,numerator,denominator,value,stdError"));
    assert!(lines.next().unwrap().starts_with("E,11,30,"), "{out}");

    let o = proxmatch(&["--format", "json", "exact", "--op", "D", "--gaps", "1/10,2/10,3/10,4/10"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["numerator"], "2");
    assert_eq!(v["result"]["denominator"], "5");
}

#[test]
fn enumerate_fixture() {
    let path = fixture("cyclic_2x2.json");
    let o = proxmatch(&["--format", "json", "enumerate", "--instance", &path]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 2);
}

#[test]
fn runs_repeat_byte_for_byte() {
    let args = ["--seed", "11", "rpmp", "--n", "16", "--k", "3", "--trials", "5", "--sample-size", "2"];
    let a = proxmatch(&args);
    let b = proxmatch(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1 + 5 * 2);

    let args = ["--seed", "4", "line", "--lambda", "1", "--mu", "2", "--window", "300", "--trials", "2"];
    let a = proxmatch(&args);
    let b = proxmatch(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("trial,waveId,N_plus,N_minus,blueCoord,X,matchedRedCoord,matcher\n"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let o = proxmatch(&["rpmp", "--foo", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = proxmatch(&["--seed", "1", "line", "--lambda", "2", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));

    let o = proxmatch(&["rpmp", "--n", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "seed = 1\nn = 4\nk = 2\nwidth = 3\n").unwrap();
    let o = proxmatch(&["--config", cfg.to_str().unwrap(), "rpmp"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("width"));
}

#[test]
fn manifest_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let o = proxmatch(&[
        "--seed", "9", "--out", first.to_str().unwrap(),
        "line", "--lambda", "0.5", "--mu", "1.5", "--window", "200", "--trials", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("first.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["suite"], "line");

    let cfg = dir.path().join("replay.toml");
    std::fs::write(&cfg, manifest["config"].as_str().unwrap()).unwrap();
    let second = dir.path().join("second.csv");
    let o = proxmatch(&[
        "--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap(), "line",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn validate_runs_selected_criteria() {
    let o = proxmatch(&["validate", "--criteria", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[PASS] criterion  1 "));
    let o = proxmatch(&["validate", "--criteria", "14"]);
    assert_eq!(o.status.code(), Some(2));
}
