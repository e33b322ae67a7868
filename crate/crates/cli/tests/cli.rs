use std::process::{Command, Output};

fn qgl11(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgl11"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn normal_form_of_ef() {
    let o = qgl11(&["nf", "E[0]*F[0]"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "((q^2 - 1)/q)*k1^-1*k2 - ((q^2 - 1)/q)*k1*k2^-1 - F[0]*E[0]"
    );
}

#[test]
fn parse_errors_exit_with_status_two() {
    let o = qgl11(&["nf", "h[0]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 2: zero index"));
}

#[test]
fn coproduct_of_c1_is_primitive() {
    let o = qgl11(&["coproduct", "C[1]"]);
    assert_eq!(stdout(&o).trim(), "1 # C[1] + C[1] # 1");
}

#[test]
fn closed_and_oracle_pairings_agree() {
    for (a, b) in [
        ("E[0]", "F[0]"),
        ("k1*h[2]", "C[-2]*k2^-1"),
        ("F[1]*E[0]", "F[0]*E[-1]"),
    ] {
        let closed = stdout(&qgl11(&["pair", a, b]));
        let oracle = stdout(&qgl11(&["pair", a, b, "--oracle"]));
        assert_eq!(closed, oracle, "{a} | {b}");
    }
    assert_eq!(
        stdout(&qgl11(&["--q", "2", "pair", "E[0]", "F[0]"])).trim(),
        "3/2"
    );
}

#[test]
fn verify_exit_status_tracks_failures() {
    assert!(qgl11(&["verify", "--suite", "braid"]).status.success());
    let o = qgl11(&[
        "verify",
        "--suite",
        "braid",
        "--unsigned-flip",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["checks"][0]["status"], "fail");
    assert!(report["checks"][0]["witness"]
        .as_str()
        .unwrap()
        .starts_with("residual"));
}

#[test]
fn json_reports_are_stable_for_a_seed() {
    let run = || {
        let o = qgl11(&[
            "verify",
            "--suite",
            "hopf",
            "--samples",
            "10",
            "--index-bound",
            "2",
            "--seed",
            "7",
            "--format",
            "json",
        ]);
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn flags_override_config() {
    let dir = std::env::temp_dir().join(format!("qgl11-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(
        &cfg,
        r#"{"order": 1, "suites": ["perk-schultz", "fixtures"]}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = qgl11(&["--config", cfg, "verify"]);
    let text = stdout(&o);
    assert!(o.status.success());
    assert!(text.contains("suite perk-schultz (order 1"));
    assert!(text.contains("suite fixtures (order 1"));
    let o = qgl11(&[
        "--config",
        cfg,
        "verify",
        "--suite",
        "perk-schultz",
        "--order",
        "3",
    ]);
    assert!(stdout(&o).contains("through z^3"));
    assert!(!stdout(&o).contains("fixtures"));
}

#[test]
fn transfer_writes_blocks() {
    let out = std::env::temp_dir().join(format!("qgl11-transfer-{}.json", std::process::id()));
    let o = qgl11(&[
        "transfer",
        "--a",
        "1",
        "--chain",
        "(2,3)",
        "--order",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for b in ["A11", "A12", "A21", "A22"] {
        assert!(v["blocks"][b].is_object(), "{b}");
    }
    assert_eq!(v["v1_count"], serde_json::json!([1, 0]));
}

#[test]
fn rmatrix_lists_coefficients() {
    let o = qgl11(&[
        "rmatrix", "--left", "rho", "--right", "pi(2,3)", "--order", "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["coefficients"]["0"].is_array());
    assert!(v["coefficients"]["1"].is_array());
}
