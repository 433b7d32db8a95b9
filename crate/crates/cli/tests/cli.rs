use std::process::{Command, Output};

use serde_json::Value;

fn polyfus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyfus")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn construct_reports_orders() {
    let o = polyfus(&["construct", "-p", "3", "-m", "2", "Sn:2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["order"], 6561);
    assert_eq!(r["center_order"], 9);
    assert_eq!(r["upper_central"], serde_json::json!([9, 81, 6561]));
    assert_eq!(r["exponent"], 9);
    let r = json(&polyfus(&["construct", "-p", "3", "-m", "2", "SLambda", "--json"]));
    assert_eq!(r["order"], 59049);
    assert_eq!(r["center_order"], 81);
    assert_eq!(r["v_mod_vs_order"], 9);
}

#[test]
fn construct_text_mode() {
    let o = polyfus(&["construct", "-p", "5", "Sn:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order           3125"));
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["construct", "-p", "2", "Sn:1"][..],
        &["construct", "-p", "4", "Sn:1"],
        &["construct", "-p", "3", "Sn:4"],
        &["construct", "-p", "3", "Sx:1"],
        &["verify", "nosuch"],
        &["verify", "somnibus", "-m", "2"],
        &["verify", "somnibus", "--tier", "fast"],
        &["describe", "F*(2,3,R)"],
        &["export", "-p", "5", "-m", "2", "Sn:4", "--table"],
    ] {
        let o = polyfus(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn verify_out0_for_a_named_system() {
    let o = polyfus(&["verify", "out0", "-p", "3", "-m", "2", "-n", "2", "--system", "F*(n,q,R)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let first: Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["status"], "verified");
    assert_eq!(first["counts"]["out0_order"], 16);
}

#[test]
fn out_of_range_parameters_are_skipped() {
    let o = polyfus(&["verify", "gamma-iso", "-p", "3", "-n", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.iter().all(|l| l["status"] == "skipped"));
}

#[test]
fn verify_list_names_every_suite() {
    let o = polyfus(&["verify", "list"]);
    let text = stdout(&o);
    for id in ["somnibus", "com-full", "cvs-p", "psi-star", "r-cap", "out0", "tower", "essential-exclusion"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let a = polyfus(&["verify", "somnibus", "-p", "3", "-m", "2", "--json", "--jobs", "1"]);
    let b = polyfus(&["verify", "somnibus", "-p", "3", "-m", "2", "--json", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn export_series_and_table() {
    let r = json(&polyfus(&["export", "-p", "3", "Sn:1", "--series", "upper"]));
    assert_eq!(r["orders"], serde_json::json!([3, 27]));
    let a = polyfus(&["export", "-p", "3", "Sn:1", "--table"]);
    let b = polyfus(&["export", "-p", "3", "Sn:1", "--table"]);
    assert_eq!(a.stdout, b.stdout);
    let t = json(&a);
    let rows = t["table"].as_array().unwrap();
    assert_eq!(rows.len(), 729);
    assert_eq!(t["closed"], true);
    // sorted by coefficient tuple, identity first
    assert_eq!(t["elements"][0], serde_json::json!({"c": [0], "vec": [[0], [0]]}));
    // each row of the Cayley table is a permutation
    for i in 0..27 {
        let mut ks: Vec<u64> = rows[i * 27..(i + 1) * 27].iter().map(|r| r[2].as_u64().unwrap()).collect();
        ks.sort();
        assert_eq!(ks, (0..27).collect::<Vec<_>>());
    }
}

#[test]
fn export_to_file() {
    let dir = std::env::temp_dir().join(format!("polyfus-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let o = polyfus(&["export", "-p", "3", "-m", "2", "SLambda", "--series", "lower", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["kind"], "lower_central");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn describe_systems() {
    let r = json(&polyfus(&["describe", "F*_Lambda(9)", "--json"]));
    assert_eq!(r["out0_order"], 64);
    assert_eq!(r["essentials"], serde_json::json!(["V", "R"]));
    let r = json(&polyfus(&["describe", "F*(n,q,Q)", "-p", "5", "-m", "2", "-n", "3", "--json"]));
    assert_eq!(r["base"]["order"], 25u64.pow(5));
}
