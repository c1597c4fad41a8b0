//! End-to-end checks of the command-line interface.

use std::process::Command;

fn loggeo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loggeo"))
}

#[test]
fn corpus_list_names() {
    let out = loggeo().args(["corpus", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("semistable-node"));
    assert!(text.contains("standard-log-point-f2"));
}

#[test]
fn validate_builtin_and_file() {
    let out = loggeo().args(["validate", "cusp-monoid"]).output().unwrap();
    assert!(out.status.success());
    // a chart file from disk
    let dir = tempdir();
    let path = dir.join("chart.json");
    std::fs::write(
        &path,
        r#"{
            "name": "file-chart",
            "field": {"type": "Q"},
            "A": {"variables": [], "relations": []},
            "Q_monoid": {"ambient_rank": 1, "generators": []},
            "alpha_A": [],
            "B": {"variables": ["x"], "relations": []},
            "P_monoid": {"ambient_rank": 1, "generators": [[1]]},
            "alpha_B": ["x"],
            "Q_to_P": [[0]]
        }"#,
    )
    .unwrap();
    let out = loggeo().arg("validate").arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn validate_rejects_broken_chart() {
    let dir = tempdir();
    let path = dir.join("broken.json");
    std::fs::write(
        &path,
        r#"{
            "name": "broken",
            "field": {"type": "Q"},
            "A": {"variables": ["t"], "relations": []},
            "Q_monoid": {"ambient_rank": 1, "generators": [[1]]},
            "alpha_A": ["t"],
            "B": {"variables": ["x", "y"], "relations": ["x*y - t"]},
            "P_monoid": {"ambient_rank": 2, "generators": [[1,0],[0,1]]},
            "alpha_B": ["x", "x"],
            "Q_to_P": [[1],[1]]
        }"#,
    )
    .unwrap();
    let out = loggeo().arg("validate").arg(&path).output().unwrap();
    assert!(!out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("violation"), "{text}");
}

#[test]
fn parse_error_position_reported() {
    let dir = tempdir();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
            "name": "bad",
            "field": {"type": "Q"},
            "A": {"variables": [], "relations": []},
            "Q_monoid": {"ambient_rank": 1, "generators": []},
            "alpha_A": [],
            "B": {"variables": ["x"], "relations": ["x^ + 1"]},
            "P_monoid": {"ambient_rank": 1, "generators": []},
            "alpha_B": [],
            "Q_to_P": [[0]]
        }"#,
    )
    .unwrap();
    let out = loggeo().arg("validate").arg(&path).output().unwrap();
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("parse error at"), "{text}");
}

#[test]
fn omega_presentation_output() {
    let out = loggeo()
        .args(["omega", "nc-divisor", "--n", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let gens: Vec<String> = doc["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(gens, vec!["d(x)", "dlog(g0)"]);
    // the derivation relation d(x) - x dlog(g0) is recorded
    assert_eq!(doc["relations"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_report_roundtrip_and_exit_codes() {
    let dir = tempdir();
    let path = dir.join("report.json");
    let out = loggeo()
        .args(["verify", "standard-log-point-f2", "--suite", "derham"])
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["totals"]["fail"], 0);
    // byte-identical across runs
    let out2 = loggeo()
        .args(["verify", "standard-log-point-f2", "--suite", "derham"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out2.stdout).unwrap();
    assert_eq!(stdout.trim(), std::fs::read_to_string(&path).unwrap().trim());
}

#[test]
fn crystal_without_connection_is_precondition_error() {
    let out = loggeo()
        .args(["verify", "cusp-monoid", "--suite", "crystal"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("no connection"), "{text}");
}

#[test]
fn derham_matrices_output() {
    let out = loggeo()
        .args(["derham", "nc-divisor", "--max-degree", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m0 = &doc["matrices"][0];
    assert_eq!(m0["degree"], 0);
    // d(x) = x dlog(g0) in the free basis
    assert_eq!(m0["entries"][0][0], "x");
}

#[test]
fn limits_env_var_honored() {
    let out = loggeo()
        .env("LOGGEO_LIMITS", "total_degree=2")
        .args(["verify", "semistable-node", "--suite", "ideals", "--n-max", "2"])
        .output()
        .unwrap();
    // tight limits cause skips, not failures: exit code stays zero
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["totals"]["skipped"].as_u64().unwrap() > 0);
    assert_eq!(doc["totals"]["fail"], 0);
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "loggeo-cli-test-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
