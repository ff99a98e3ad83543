use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schurpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares json-mode stdout with a checked-in file. `SCHURPAIR_BLESS=1`
/// rewrites the file instead.
fn check_golden(name: &str, args: &[&str]) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    let path = golden_path(name);
    if std::env::var_os("SCHURPAIR_BLESS").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stdout(&out), expected, "{name} drifted");
}

#[test]
fn multiplier_text() {
    for (spec, line) in [
        ("Z2 x Z2 x Z2", "M = Z2 x Z2 x Z2 (order 8), t = 0\n"),
        ("D8", "M = Z2 (order 2), t = 2\n"),
        ("E2(3)", "M = 1 (order 1), t = 3\n"),
        ("Q8", "M = 1 (order 1), t = 3\n"),
        ("E1(3)", "M = Z3 x Z3 (order 9), t = 1\n"),
    ] {
        let out = run(&["multiplier", spec]);
        assert!(out.status.success(), "{spec}");
        assert_eq!(stdout(&out), line, "{spec}");
    }
}

#[test]
fn pair_reports() {
    for (n, k, t, case) in [
        ("Z9", "1", 1, "T13.i"),
        ("Z3 x Z3", "Z3", 0, "T10.ii"),
        ("Z4", "Z2", 2, "T14.iv"),
    ] {
        let r = json(&["pair", n, k]);
        assert_eq!(r["t"], t, "{n} {k}");
        let matched: Vec<&str> = r["matched_cases"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect();
        assert!(matched.contains(&case), "{n} {k}: {matched:?}");
    }
}

#[test]
fn text_and_json_carry_the_same_pair_data() {
    let r = json(&["pair", "E1(3)", "Z3"]);
    let text = stdout(&run(&["pair", "E1(3)", "Z3"]));
    for key in [
        "t",
        "bound1_slack",
        "bound7_holds",
        "commutator_order",
        "pair_center_order",
    ] {
        assert!(
            text.contains(&format!("{key} = {}\n", r[key])),
            "{key} in {text}"
        );
    }
    assert_eq!(r["mGN"], serde_json::json!([3, 3, 3, 3]));
    assert!(
        text.contains("M(G,N) = Z3 x Z3 x Z3 x Z3 (order 81)\n"),
        "{text}"
    );
    assert_eq!(r["t"], 2);
}

#[test]
fn classify_reports_status_and_scope() {
    let v = json(&["classify", "D8", "1"]);
    assert_eq!(v["status"], "confirmed");
    assert_eq!(v["scope"], "in_scope");
    assert_eq!(v["matched_cases"][0], "T14.ii");
    let text = stdout(&run(&["classify", "D8", "1"]));
    assert_eq!(
        text,
        "t = 2, status confirmed, scope in_scope, matched [T14.ii]\n"
    );
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "T10", "--p", "2", "--budget", "32"]), 0);

    let r = json(&["verify", "T14", "--p", "3", "--budget", "81"]);
    assert_eq!(r["mismatches"], 0);
    let forward = r["reports"][0]["forward"].as_array().unwrap();
    assert_eq!(forward.len(), 7);
    for f in forward {
        let status = f["status"].as_str().unwrap();
        assert!(["pass", "p_incompatible"].contains(&status), "{f}");
    }

    let out = run(&["verify", "T15", "--p", "2", "--budget", "16"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("budget 16") && err.contains("T15."), "{err}");
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["multiplier", "E1(2)"][..],
        &["multiplier", "Z0"],
        &["multiplier", "Z4 x"],
        &["multiplier", "@missing-table.json"],
        &["pair", "Z4", "Q9"],
        &["verify", "T11"],
        &["catalog", "--order", "2^x"],
    ] {
        assert_eq!(code(args), 2, "{args:?}");
    }
}

#[test]
fn budget_errors_exit_with_three() {
    assert_eq!(code(&["multiplier", "Z64", "--budget", "32"]), 3);
    assert_eq!(code(&["multiplier", "Z4", "--budget", "100"]), 3);
    assert_eq!(code(&["verify", "T10", "--budget", "243"]), 3);
    assert_eq!(code(&["pair", "Z9 x Z9", "Z3"]), 3);
}

#[test]
fn files_on_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z4.json");
    std::fs::write(
        &table,
        r#"{"order": 4, "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}"#,
    )
    .unwrap();
    let spec = format!("@{}", table.display());
    assert_eq!(
        stdout(&run(&["multiplier", &spec])),
        "M = 1 (order 1), t = 1\n"
    );

    // Inversion on Z4 gives the dihedral group; N = Z4 is then not a direct
    // factor, so the direct-only cases do not apply.
    let action = dir.path().join("inv.json");
    std::fs::write(&action, r#"{"generator_images": {"1": [0, 3, 2, 1]}}"#).unwrap();
    let action = action.to_str().unwrap();
    let r = json(&["pair", "Z4", "Z2", "--action", action]);
    assert_eq!(r["mG"], serde_json::json!([2]));
    assert_eq!(r["t"], 2);
    assert_eq!(r["matched_cases"], serde_json::json!([]));
    let v = json(&["classify", "Z4", "Z2", "--action", action]);
    assert_eq!(v["scope"], "outside_hypotheses");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"generator_images": {"1": [0, 2, 1, 3]}}"#).unwrap();
    assert_eq!(
        code(&["pair", "Z4", "Z2", "--action", bad.to_str().unwrap()]),
        2
    );
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(
        code(&["pair", "Z4", "Z2", "--action", bad.to_str().unwrap()]),
        2
    );

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"order": 2, "table": [[0,1],[1,1]]}"#).unwrap();
    assert_eq!(code(&["multiplier", &format!("@{}", broken.display())]), 2);
}

#[test]
fn cache_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let cache = cache.to_str().unwrap();
    let first = run(&["--cache", cache, "--format", "json", "pair", "D8", "Z2"]);
    assert!(first.status.success());
    assert!(Path::new(cache).exists());
    let second = run(&["--cache", cache, "--format", "json", "pair", "D8", "Z2"]);
    assert_eq!(first.stdout, second.stdout);

    std::fs::write(cache, "garbage").unwrap();
    assert_eq!(code(&["--cache", cache, "multiplier", "Z2"]), 2);
}

#[test]
fn catalog_listing() {
    let groups = json(&["catalog", "--order", "2^3"]);
    let groups = groups["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 5);
    assert_eq!(groups.iter().filter(|g| g["abelian"] == false).count(), 2);
    assert_eq!(
        json(&["catalog", "--order", "3"])["groups"]
            .as_array()
            .unwrap()
            .len(),
        16
    );
}

#[test]
fn json_mode_is_deterministic() {
    let args = [
        "--format", "json", "verify", "T12", "T13", "--p", "2,3", "--budget", "27",
    ];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn golden_outputs() {
    check_golden("multiplier_d8.json", &["multiplier", "D8"]);
    check_golden("pair_z4_z2.json", &["pair", "Z4", "Z2"]);
    check_golden(
        "classify_elemab_z4.json",
        &["classify", "ElemAb(2,3)", "Z4"],
    );
    check_golden("catalog_27.json", &["catalog", "--order", "3^3"]);
    check_golden(
        "verify_t10_p2_b16.json",
        &["verify", "T10", "--p", "2", "--budget", "16"],
    );
}
