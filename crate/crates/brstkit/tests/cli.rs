use std::path::Path;
use std::process::{Command, Output};

use brstkit::config::{nf4, triv};
use serde_json::{json, Value};

fn brstkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brstkit")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_config(dir: &Path, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(&nf4().to_json()).unwrap();
    edit(&mut v);
    let p = dir.join("config.json");
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p.display().to_string()
}

#[test]
fn config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), |_| {});
    let o = brstkit(&["--config", &path, "--h-max", "1", "basis"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(report(&o)["config"]["hash"], report(&brstkit(&["--config", "nf4", "--h-max", "1", "basis"]))["config"]["hash"]);
}

#[test]
fn invalid_configs_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(Box<dyn FnOnce(&mut Value)>, &str)> = vec![
        (Box::new(|v| v["h_max"] = json!("-1/2")), "/h_max: h_max must be ≥ 0"),
        (Box::new(|v| v["h_max"] = json!("1/3")), "/h_max: h_max must be a half-integer"),
        (
            Box::new(|v| {
                let b = v["matter"][0].clone();
                v["matter"].as_array_mut().unwrap().push(b);
            }),
            "/matter/1/name: duplicate block name",
        ),
        (Box::new(|v| v["matter"][0]["colour"] = json!(1)), "/matter/0/colour: unknown field `colour`"),
        (Box::new(|v| v["matter"][0]["omega"][0][1] = json!("x")), "/matter/0/omega/0/1"),
    ];
    for (edit, msg) in cases {
        let path = write_config(dir.path(), edit);
        let o = brstkit(&["--config", &path, "basis"]);
        assert_eq!(o.status.code(), Some(2), "{msg}");
        assert!(stderr(&o).contains(msg), "{msg} not in {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let o = brstkit(&["--config", "no-such-config", "basis"]);
    assert_eq!(o.status.code(), Some(2));
    let o = brstkit(&["--config", "nf4", "--h-max", "-1", "basis"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fermionic_matter_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), |v| v["matter"][0]["kind"] = json!("symplectic_fermion"));
    let o = brstkit(&["--config", &path, "--h-max", "1", "cohomology"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn trivial_cohomology_equals_the_basis() {
    let b = report(&brstkit(&["--config", "triv", "basis"]));
    let c = report(&brstkit(&["--config", "triv", "cohomology"]));
    assert_eq!(c["ok"], json!(true));
    assert_eq!(b["data"], c["data"]["rows"]);
    assert_eq!(c["config"]["name"], json!(triv().name));
}

#[test]
fn hl_ring_counts_quadratic_invariants() {
    let o = brstkit(&["--config", "nf4", "--h-max", "1", "hl-ring"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r["data"]["quadratic_invariants"], json!(28));
    let quad = r["data"]["koszul"].as_array().unwrap().iter().find(|k| k["degree"] == json!(2) && k["d"] == json!(0)).unwrap();
    assert_eq!(quad["cohomology"], json!(28));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["ok"] == json!(true)));
}

#[test]
fn csv_output() {
    let o = brstkit(&["--config", "triv", "--format", "csv", "basis"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,R,d,dim"));
    assert_eq!(lines.next(), Some("0,0,0,1"));
    // without a table the checks are written
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = brstkit(&["--config", "triv", "--format", "csv", "--out", out, "verify", "algebra"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("verify-algebra.csv")).unwrap();
    assert!(text.starts_with("name,ok,witness"), "{text}");
}

#[test]
fn stale_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = ["--config", "nf4", "--h-max", "1", "--out", out, "complex", "build"];
    let first = brstkit(&args);
    assert!(first.status.success());
    assert!(!stderr(&first).contains("cache"));
    let report_file = dir.path().join("complex-build.json");
    let want = std::fs::read(&report_file).unwrap();
    let hit = brstkit(&args);
    assert!(stderr(&hit).contains("loaded from cache"));
    assert_eq!(std::fs::read(&report_file).unwrap(), want);

    let cache = std::fs::read_dir(dir.path().join("cache")).unwrap().next().unwrap().unwrap().path();
    for (field, bad) in [("key", json!("0000")), ("h2_max", json!(3)), ("schema_version", json!(99))] {
        let mut v: Value = serde_json::from_slice(&std::fs::read(&cache).unwrap()).unwrap();
        v[field] = bad;
        std::fs::write(&cache, serde_json::to_vec(&v).unwrap()).unwrap();
        let o = brstkit(&args);
        assert!(o.status.success());
        assert!(!stderr(&o).contains("loaded from cache"), "tampered {field} accepted");
        assert_eq!(std::fs::read(&report_file).unwrap(), want);
    }
    std::fs::write(&cache, b"{ not json").unwrap();
    let o = brstkit(&args);
    assert!(o.status.success() && !stderr(&o).contains("loaded from cache"));
}
