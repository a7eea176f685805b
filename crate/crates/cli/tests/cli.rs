use std::process::{Command, Output};

fn heightlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heightlab")).args(args).output().expect("spawn heightlab")
}

#[test]
fn bound_example_exits_zero() {
    let out = heightlab(&["cohyp", "bound", "--alpha", "2", "--beta", "1/2", "--c", "-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificates"][0]["actual"]["bound"], "6");
}

#[test]
fn failed_certificate_exits_one_and_still_reports() {
    let out = heightlab(&["cohyp", "recineq", "--heights", "1,1,1,1", "--alpha", "2", "--beta", "0", "--c", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["certificates"].as_array().unwrap().iter().any(|c| c["pass"] == false));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(heightlab(&["--bogus"]).status.code(), Some(2));
    assert_eq!(heightlab(&["trace-scan", "--m", "2"]).status.code(), Some(2));
    assert_eq!(heightlab(&["cohyp", "bound", "--alpha", "x"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_two() {
    let out = heightlab(&["cohyp", "bound", "--alpha", "1", "--beta", "1", "--c", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["p2", "degseq", "--n", "3"][..],
        &["p2", "preimages", "--samples", "5"][..],
        &["trace-scan", "--m", "1", "--format", "csv"][..],
        &["jacobian-table"][..],
    ] {
        let a = heightlab(args);
        let b = heightlab(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn degseq_csv_table() {
    let out = heightlab(&["p2", "degseq", "--d", "4", "--p", "2", "--n", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,degree\n1,4\n2,16\n3,64\n");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("heightlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = heightlab(&["cohyp", "lyapunov", "--degrees", "4,2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "cohyp lyapunov");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timing_flag_adds_wall_time() {
    let out = heightlab(&["jacobian-table", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["wall_time_ms"].is_u64());
    let plain: serde_json::Value = serde_json::from_slice(&heightlab(&["jacobian-table"]).stdout).unwrap();
    assert!(plain.get("wall_time_ms").is_none());
}
