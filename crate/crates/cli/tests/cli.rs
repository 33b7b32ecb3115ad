use std::process::Command;

fn qtb(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qtb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = qtb(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

/// Strip the wall-clock stamp before comparing reports.
fn normalized(args: &[&str]) -> serde_json::Value {
    let mut v = stdout_json(args);
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn list_catalog_nonempty_and_unique() {
    let out = qtb(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let ids: Vec<&str> = text
        .lines()
        .filter_map(|l| l.split_whitespace().nth(2))
        .collect();
    assert!(text.lines().count() >= 15);
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len(), "duplicate report ids in catalog");
}

#[test]
fn noisy_maxcut_headline_number() {
    let v = stdout_json(&["bound", "maxcut-noisy", "--p", "0.1"]);
    assert_eq!(v["results"]["max_n"].as_f64().unwrap(), 3.0 * (1u64 << 28) as f64);
}

#[test]
fn qaoa_depth_inversion() {
    let v = stdout_json(&["bound", "qaoa-depth", "--n", "1806336", "--degree", "55"]);
    let rounds = v["results"]["rounds"].as_f64().unwrap();
    assert!((rounds - 1.0).abs() < 1e-12);
    assert_eq!(
        v["results"]["min_n_for_one_round"].as_u64().unwrap(),
        576 * 56 * 56
    );
}

#[test]
fn bound_smoke_suite() {
    for args in [
        vec!["bound", "low-depth", "--n", "2304"],
        vec!["bound", "approx-threshold", "--degree", "55"],
        vec!["bound", "chebyshev", "--c", "4", "--n", "9", "--lip", "1", "--r", "12"],
        vec!["bound", "depol-tail", "--p", "0.1", "--layers", "5", "--eps", "0.1", "--n", "8", "--lip", "2"],
        vec!["bound", "advantage-depth", "--a-c", "0.5", "--p", "0.1"],
        vec!["bound", "anneal-time", "--n", "1000000"],
        vec!["bound", "ghz-time", "--n", "1000000"],
        vec!["bound", "regular-threshold", "--q", "0.45", "--degree", "50", "--n", "100"],
        vec!["bound", "h-of-t", "--q", "0.4", "--t", "2"],
        vec![
            "bound", "noisy-annealer-tail", "--q", "0.4", "--t", "2", "--eps", "0.1", "--n", "3",
            "--lip", "2", "--mean", "1.44",
        ],
        vec!["bound", "lr", "--k0", "3", "--t", "0.5"],
        vec!["bound", "purity-unital", "--p", "0.2", "--layers", "3", "--n", "6"],
    ] {
        let v = stdout_json(&args);
        assert!(v["id"].is_string(), "{args:?}");
        assert!(v["results"].is_object(), "{args:?}");
    }
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "poincare", "--n", "4", "--depth", "2", "--observables", "5"],
        vec!["verify", "w1", "--pairs", "5", "--bits", "4"],
        vec!["verify", "depol-decay", "--circuits", "4"],
        vec!["verify", "purity", "--n", "3", "--max-layers", "2"],
    ] {
        let v = stdout_json(&args);
        assert_eq!(v["results"]["pass"], serde_json::json!(true), "{args:?}");
    }
}

#[test]
fn figure_csv_structure() {
    let out = qtb(&[
        "figure",
        "qaoa-entropy",
        "--format",
        "csv",
        "--contraction-grid",
        "0:0.5:0.05",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q,contraction,entropy_density,threshold_density"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4 * 11);
    // Monotone decrease in the contraction coefficient for each q.
    for chunk in rows.chunks(11) {
        for w in chunk.windows(2) {
            assert!(w[1][2] <= w[0][2] + 1e-12);
        }
    }
    // Curve ordering in q at fixed contraction: smaller q, larger density.
    for i in 0..11 {
        for c in 0..3 {
            assert!(rows[c * 11 + i][2] >= rows[(c + 1) * 11 + i][2] - 1e-12);
        }
    }
    // q = ½ mixer layers are free: density = (1−p)^{34}·ln2 exactly.
    for row in rows.chunks(11).last().unwrap() {
        let expected = (1.0 - row[1]).powi(34) * std::f64::consts::LN_2;
        assert!((row[2] - expected).abs() < 1e-9, "{} vs {expected}", row[2]);
    }
}

#[test]
fn deterministic_reports_modulo_timestamp() {
    let args = ["verify", "poincare", "--n", "4", "--depth", "2", "--seed", "9"];
    assert_eq!(normalized(&args), normalized(&args));
    let fig = ["figure", "qaoa-entropy", "--contraction-grid", "0:0.2:0.1"];
    assert_eq!(normalized(&fig), normalized(&fig));
}

#[test]
fn run_config_matches_direct_invocation() {
    let dir = std::env::temp_dir().join(format!("qtb-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("job.json");
    let out_path = dir.join("report.json");
    std::fs::write(
        &cfg,
        serde_json::json!({
            "command": "bound/maxcut-noisy",
            "parameters": { "p": 0.1 },
            "out": out_path.to_str().unwrap(),
        })
        .to_string(),
    )
    .unwrap();
    let out = qtb(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut from_file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    from_file.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(from_file, normalized(&["bound", "maxcut-noisy", "--p", "0.1"]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // Unknown flag → clap schema error (2).
    assert_eq!(qtb(&["bound", "maxcut-noisy", "--nope", "1"]).status.code(), Some(2));
    // Domain violation → validation (2).
    assert_eq!(qtb(&["bound", "h-of-t", "--q", "0.9", "--t", "2"]).status.code(), Some(2));
    // Precondition violation → 3.
    assert_eq!(
        qtb(&["bound", "lr", "--delta", "3", "--k0", "2", "--t", "0.5"]).status.code(),
        Some(3)
    );
    // Bad config field → 2.
    let dir = std::env::temp_dir().join(format!("qtb-test-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.json");
    std::fs::write(&cfg, r#"{"command": "bound/maxcut-noisy", "parameters": {"p": 0.1}, "bogus": 1}"#)
        .unwrap();
    assert_eq!(qtb(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
