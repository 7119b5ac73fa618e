use std::process::{Command, Output};

fn wickforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wickforge"))
        .args(args)
        .env_remove("WICKFORGE_EPS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_boson_passes() {
    let out = wickforge(&["validate", "--preset", "boson", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("result: pass"));
    assert!(!text.contains(" fail "));
}

#[test]
fn quon_gram_sector_three() {
    let out = wickforge(&["gram", "--preset", "quon", "--q", "0.5", "--dim", "1", "--sector", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[[2.625]]"), "{text}");
    assert!(text.contains("positive_definite: true"), "{text}");
}

#[test]
fn quon_normal_order() {
    let out = wickforge(&["normal-order", "a(1) c(1)", "--preset", "quon", "--q", "0.5", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1 + 0.5 c(1) a(1)");
}

#[test]
fn negative_q_is_accepted() {
    let out = wickforge(&["normal-order", "a(1) c(1)", "--preset", "quon", "--q", "-0.5", "--dim", "1"]);
    assert_eq!(stdout(&out).trim(), "1 - 0.5 c(1) a(1)");
}

#[test]
fn verify_reports_residuals() {
    let out = wickforge(&[
        "normal-order", "a(1) c(2) c(1)", "--preset", "boson", "--dim", "2", "--verify", "--max-sector", "3", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verify"].as_array().unwrap().len(), 4);
    assert_eq!(v["passed"], true);
    assert!(v["stats"]["generations"].as_u64().unwrap() <= v["stats"]["step_bound"].as_u64().unwrap());
}

#[test]
fn emitted_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phase.json");
    let path = path.to_str().unwrap();
    let out = wickforge(&["catalog", "--preset", "phase", "--dim", "3", "--phi", "0.3,-0.2,1.1", "--emit", path]);
    assert_eq!(out.status.code(), Some(0));
    let from_file = wickforge(&["validate", "--file", path, "--json"]);
    let from_preset = wickforge(&["validate", "--preset", "phase", "--dim", "3", "--phi", "0.3,-0.2,1.1", "--json"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_preset));

    let stdout_emit = wickforge(&["catalog", "--preset", "phase", "--dim", "3", "--phi", "0.3,-0.2,1.1", "--emit"]);
    assert_eq!(stdout(&stdout_emit), std::fs::read_to_string(path).unwrap());
}

#[test]
fn quotient_reports_dimensions() {
    let out = wickforge(&["quotient", "--preset", "fermion", "--dim", "2", "--max-sector", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dims: Vec<u64> = v["sectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["quotient_dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 2, 1, 0, 0]);
    assert!(v["sectors"][3]["min_eig"].is_null());
}

#[test]
fn kernel_dimension() {
    let out = wickforge(&["kernel", "--preset", "boson", "--dim", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["validate"], 2),
        (&["validate", "--preset", "boson", "--file", "x.json"], 2),
        (&["validate", "--file", "/nonexistent/ops.json"], 2),
        (&["validate", "--preset", "quon"], 2),
        (&["validate", "--preset", "boson", "--q", "0.5"], 2),
        (&["validate", "--preset", "boson", "--eps", "-1"], 2),
        (&["normal-order", "c(1) +", "--preset", "boson"], 2),
        (&["normal-order", "c(9)", "--preset", "boson"], 2),
        (&["quotient", "--preset", "quon", "--q", "0.5"], 1),
        (&["validate", "--preset", "quon", "--q", "1.5", "--dim", "2"], 0),
        (&["gram", "--preset", "fermion", "--dim", "7", "--sector", "6"], 3),
    ];
    for (args, want) in cases {
        assert_eq!(wickforge(args).status.code(), Some(*want), "{args:?}");
    }
}

#[test]
fn inconsistent_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let flip = "[[1,1,1,1,0.5,0],[1,2,2,1,0.5,0],[2,1,1,2,0.5,0],[2,2,2,2,0.5,0]]";
    let braid = "[[1,1,1,1,1,0],[1,2,2,1,1,0],[2,1,1,2,1,0],[2,2,2,2,1,0]]";
    std::fs::write(&path, format!(r#"{{"dim": 2, "cross": {flip}, "braid": {braid}}}"#)).unwrap();
    let path = path.to_str().unwrap();
    let out = wickforge(&["validate", "--file", path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("consistency_kernel"));
    let out = wickforge(&["quotient", "--file", path, "--max-sector", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eps_falls_back_to_environment() {
    // A loose tolerance accepts the 0.5 consistency residual.
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_wickforge"));
        cmd.args(["validate", "--preset", "quon", "--q", "1.5", "--dim", "2", "--json"]).args(extra);
        match env {
            Some(v) => cmd.env("WICKFORGE_EPS", v),
            None => cmd.env_remove("WICKFORGE_EPS"),
        };
        let out = cmd.output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["eps"].as_f64().unwrap()
    };
    assert_eq!(run(None, &[]), 1e-9);
    assert_eq!(run(Some("1e-6"), &[]), 1e-6);
    assert_eq!(run(Some("1e-6"), &["--eps", "1e-3"]), 1e-3);
    let bad = Command::new(env!("CARGO_BIN_EXE_wickforge"))
        .args(["validate", "--preset", "boson"])
        .env("WICKFORGE_EPS", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn catalog_lists_presets() {
    let out = wickforge(&["catalog"]);
    let text = stdout(&out);
    for name in ["boltzmann", "boson", "fermion", "quon", "phase"] {
        assert!(text.contains(name));
    }
}
