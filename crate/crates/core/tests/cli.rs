use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cyclering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclering")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclering-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn aut_writes_orders_as_strings() {
    let out = scratch("aut.json");
    let o = cyclering(&["aut", "D4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("|O| = 1152"));
    assert_eq!(read(&out)["order_O"], "1152");
}

#[test]
fn genus_file_feeds_cycle_and_pair() {
    let g = scratch("genus.json");
    let o = cyclering(&["genus", "D4", "--prime", "3", "--out", g.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read(&g);
    assert_eq!(v["class_count"], 1);
    assert_eq!(v["mass"], "1/576");
    let c = scratch("cycle.json");
    let o = cyclering(&["cycle", g.to_str().unwrap(), "--T", "1", "--out", c.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read(&c);
    assert_eq!(v["rep"][0], "24");
    assert_eq!(v["A"], "24");
    assert_eq!(v["sharp"][0].as_array().unwrap().len(), 12);
    let o = cyclering(&["pair", g.to_str().unwrap(), "--T1", "1", "--T2", "1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["inner_product"], "1152");
}

#[test]
fn isom_reports_distinct() {
    let o = cyclering(&["isom", "I2", "I2", "--out", scratch("isom.json").to_str().unwrap()]);
    assert!(o.status.success());
    let o = cyclering(&["isom", "E8E8", "D16+"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["isometric"], false);
}

#[test]
fn ring_and_rank_subcommands() {
    let z = r#"[{"grade":1,"basis":[[1,0,0]],"coeff":2},{"grade":2,"basis":[[0,1,0]]}]"#;
    let o = cyclering(&["ring", "reduce", z, "--cutoff", "3"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!(["0", "2", "1", "0"]));
    let o = cyclering(&["ring", "pair", z, r#"[{"grade":1,"basis":[[0,0,1]],"coeff":"1/2"}]"#, "--cutoff", "3"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pair"], "1/2");
    let o = cyclering(&["sc-rank", r#"[[1,2],[2,4],[0,0]]"#]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], 1);
    assert_eq!(v["kernel"].as_array().unwrap().len(), 2);
}

#[test]
fn rep_and_theta() {
    let o = cyclering(&["rep", "I3", "--T", "3/2"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rep"], "8");
    let o = cyclering(&["theta", "E8", "--bound", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let a: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["A"].as_str().unwrap()).collect();
    assert_eq!(a, ["1", "240", "2160"]);
    // deterministic output
    let again = cyclering(&["theta", "E8", "--bound", "4"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(cyclering(&["verify", "orbit-sum"]).status.code(), Some(0));
    assert_eq!(cyclering(&["verify", "unknown"]).status.code(), Some(1));
    assert_eq!(cyclering(&["aut", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(cyclering(&["genus", "I1"]).status.code(), Some(1));
    let budget = Command::new(env!("CARGO_BIN_EXE_cyclering"))
        .args(["aut", "E8"])
        .env("CYCLERING_NODE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("resource limit"));
}
