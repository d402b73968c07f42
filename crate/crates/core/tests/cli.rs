use std::path::Path;
use std::process::{Command, Output};

fn ubbcert(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ubbcert"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_upb() {
    let dir = tempfile::tempdir().unwrap();
    let o = ubbcert(dir.path(), &["construct", "upb", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let text = stdout(&o);
    assert!(text.contains("states 19"), "{text}");
    assert!(text.contains("complement dim 8"), "{text}");
    let states = std::fs::read_to_string(dir.path().join("upb-d3.states")).unwrap();
    assert!(states.starts_with("# d=3 set=upb\n"));
    assert_eq!(states.lines().count(), 20);
}

#[test]
fn construct_asymmetric_needs_cut() {
    let dir = tempfile::tempdir().unwrap();
    let o = ubbcert(dir.path(), &["construct", "ubb-asym", "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ubbcert(
        dir.path(),
        &["construct", "ubb-asym", "--d", "3", "--cut", "AB|C"],
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("states 23"));
    assert!(dir.path().join("ubb-asym-d3-ab-c.states").exists());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        ubbcert(dir.path(), &["construct", "upb", "--d", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ubbcert(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        ubbcert(dir.path(), &["construct", "upb"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_upb_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = ubbcert(
        dir.path(),
        &[
            "--format",
            "json",
            "verify",
            "projector",
            "--d",
            "3",
            "--set",
            "upb",
            "--claim",
            "ppt",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["complement_dim"], 8);
    assert!(dir.path().join("verify-upb-d3.json").exists());
}

#[test]
fn certify_lemma_all_cuts() {
    let dir = tempfile::tempdir().unwrap();
    let o = ubbcert(dir.path(), &["certify", "--d", "3", "--claim", "lemma"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
}

#[test]
fn failing_certificate_exits_1() {
    // A single seesaw iteration from a fixed seed cannot reach the positive
    // control threshold, so the search group reports a failure.
    let dir = tempfile::tempdir().unwrap();
    let o = ubbcert(
        dir.path(),
        &[
            "certify",
            "--d",
            "3",
            "--claim",
            "search",
            "--set",
            "upb",
            "--restarts",
            "1",
            "--max-iters",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn export_writes_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let o = ubbcert(dir.path(), &["export", "--d", "3", "--set", "ubb-sym"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let sub = dir.path().join("ubb-sym-d3");
    for f in [
        "projector.rmat",
        "density.rmat",
        "marginal_BC.rmat",
        "pt_A.rmat",
    ] {
        assert!(sub.join(f).exists(), "{f}");
    }
}
