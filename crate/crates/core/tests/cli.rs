use std::process::Command;

fn rosen(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rosen")).args(args).output().expect("binary runs")
}

#[test]
fn expand_prints_the_worked_example() {
    let out = rosen(&["expand", "--k", "3", "--x", "0.4", "--iters", "3"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("n,digit,p,q,theta\n1,+3,1,3,0.6\n"), "{stdout}");
}

#[test]
fn json_output_and_manifest_are_written() {
    let dir = std::env::temp_dir().join(format!("rosen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t0.json");
    let out = rosen(&["t0", "--k", "5", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(body["rows"].is_array());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("t0.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], 1);
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["config"]["seed"], 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_arguments_exit_with_code_2() {
    assert_eq!(rosen(&["bjw", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(rosen(&["expand", "--k", "2", "--x", "0.1"]).status.code(), Some(2));
    assert_eq!(rosen(&["expand", "--k", "3", "--x", "0.9"]).status.code(), Some(2));
}

#[test]
fn runs_are_reproducible() {
    let args = ["lenstra", "--k", "4", "--samples", "30", "--iters", "20", "--t-grid", "0.05:1"];
    let a = rosen(&args);
    let b = rosen(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn count_reports_rows_per_threshold() {
    let out = rosen(&["count", "--k", "3", "--samples", "3", "--n-grid", "10,100"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().count() > 1);
}
