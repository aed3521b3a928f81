use std::path::Path;
use std::process::{Command, Output};

fn fdrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdrlab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TABLE: &str = "index,status,z,p\n\
0,false_null,2.3,0.01\n\
1,true_null,1.7,0.04\n\
2,true_null,0.8,0.2\n\
3,false_null,-1.3,0.9\n";

#[test]
fn simulate_then_bh() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("field.csv");
    let table = table.to_str().unwrap();
    let out = fdrlab(&["simulate", "--m", "500", "--pi1", "0.2", "--mu", "3", "--seed", "9", "-o", table]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(table).unwrap();
    assert!(text.starts_with("index,status,z,p\n"));
    assert_eq!(text.lines().count(), 501);
    assert_eq!(text.matches("false_null").count(), 100);

    let out = fdrlab(&["bh", "--gamma", "0.1", table]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau,s_hat"));
    let s_hat: usize = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(lines.count(), s_hat);

    // same seed, same bytes
    let again = fdrlab(&["simulate", "--m", "500", "--pi1", "0.2", "--mu", "3", "--seed", "9"]);
    assert_eq!(stdout(&again), std::fs::read_to_string(table).unwrap());
}

#[test]
fn procedures_on_a_hand_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "t.csv", TABLE);

    let out = stdout(&fdrlab(&["bh", "--gamma", "0.2", &table]));
    assert_eq!(out, "tau,s_hat\n1.0000000000000001e-1,2\n0\n1\n");

    let out = stdout(&fdrlab(&["alpha", "--alpha", "0.05", &table]));
    assert_eq!(out, "tau,s_hat\n5.0000000000000003e-2,2\n0\n1\n");

    let out = stdout(&fdrlab(&["bonferroni", "--level", "0.05", &table]));
    assert_eq!(out, "tau,s_hat\n1.2500000000000001e-2,1\n0\n");

    let out = stdout(&fdrlab(&["oracle", "--gamma", "0.5", &table]));
    // FDP at 0.01, 0.04, 0.2, 0.9: 0, 1/2, 2/3, 1/2
    assert_eq!(out, "tau,s_hat\n9.0000000000000002e-1,4\n0\n1\n2\n3\n");

    let out = stdout(&fdrlab(&["bh", "--gamma", "0.2", "--top", "1", &table]));
    assert_eq!(out, "tau,s_hat\n1.0000000000000001e-1,2\n0\n");
}

#[test]
fn oracle_needs_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "p.csv", "p\n0.1\n0.2\n");
    let out = fdrlab(&["oracle", "--gamma", "0.1", &table]);
    assert_eq!(out.status.code(), Some(1));
    let out = fdrlab(&["bh", "--gamma", "0.5", &table]);
    assert_eq!(stdout(&out), "tau,s_hat\n5.0000000000000000e-1,2\n0\n1\n");
}

#[test]
fn malformed_table_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "bad.csv", "index,p\n0,1.5\n");
    assert_eq!(fdrlab(&["bh", "--gamma", "0.1", &table]).status.code(), Some(1));
}

#[test]
fn limit_and_ppv() {
    let out = stdout(&fdrlab(&["limit", "--mu", "2", "--pi1", "0.1", "--gamma", "0.1"]));
    let vals: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((vals[0] - 91.0).abs() < 1e-12);
    assert!((vals[1] / 0.002_160_964_799_933_111 - 1.0).abs() < 1e-12);

    let out = stdout(&fdrlab(&["ppv", "--alpha", "0.05", "--power", "0.8", "--pi1", "0.5"]));
    let fields: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let ppv: f64 = fields[3].parse().unwrap();
    assert!((ppv - 0.941_176_470_588_235_3).abs() < 1e-15);

    let out = fdrlab(&[
        "ppv", "--alpha", "0.05", "--power", "0.8", "--pi1", "0.5", "--simulate", "--m", "1000",
        "--trials", "20", "--seed", "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\nmetric,estimate,stderr,trials,flag\nppv,"));
}

#[test]
fn experiment_csv_json_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "run.cfg",
        "m=2000\npi1=0.1\nmu=2\nprocedure=bh\nlevel=\ngamma=0.1\ntrials=30\nseed=5\nm_schedule=500,2000\n",
    );
    let one = fdrlab(&["experiment", &config, "--workers", "1"]);
    let many = fdrlab(&["experiment", &config, "--workers", "16"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let csv = stdout(&one);
    assert!(csv.starts_with("m,pi1,mu,procedure,param,metric,estimate,stderr,trials,target,flag\n"));
    assert_eq!(csv.lines().count(), 9);

    let json_path = dir.path().join("out.json");
    let out = fdrlab(&["converge", &config, "--format", "json", "-o", json_path.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[8]["m"], 2000);
    assert_eq!(rows[0]["metric"], "fdr");

    let sweep = fdrlab(&["converge", &config, "--pi1-sweep", "0.1,0.01"]);
    assert!(sweep.status.success());
    assert_eq!(stdout(&sweep).lines().filter(|l| l.contains(",tau_mean,")).count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "m=10\npi1=0.1\nmu=2\nprocedure=bh\ngamma=0.1\ntrials=0\nseed=1\n");
    let out = fdrlab(&["experiment", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));

    let no_schedule = write(dir.path(), "ns.cfg", "m=10\npi1=0.1\nmu=2\nprocedure=bh\ngamma=0.1\ntrials=2\nseed=1\n");
    assert_eq!(fdrlab(&["converge", &no_schedule]).status.code(), Some(1));

    assert_eq!(fdrlab(&["bh", "--gamma", "0.1", "/nonexistent/x.csv"]).status.code(), Some(2));
    assert_eq!(fdrlab(&["--version"]).status.code(), Some(0));
    assert_eq!(fdrlab(&["bh"]).status.code(), Some(1));
}
