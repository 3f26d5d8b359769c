//! End-to-end tests of the `gmrs` binary: exit codes, output formats, and
//! the determinism contract.

use std::path::Path;
use std::process::{Command, Output};

fn gmrs(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmrs"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn generate_verify_roundtrip() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = tmp.path().join("set.json");
    let gen = gmrs(
        &[
            "generate",
            "--group",
            "Z3+Z2+Z8",
            "--rows",
            "3",
            "--cols",
            "4",
            "--cache-dir",
            "cache",
            "--out",
            out_path.to_str().unwrap(),
            "--trace",
        ],
        tmp.path(),
    );
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));
    assert!(out_path.exists());
    assert!(tmp.path().join("set.json.trace.json").exists());

    let ver = gmrs(&["verify", out_path.to_str().unwrap(), "--zero-sum"], tmp.path());
    assert_eq!(ver.status.code(), Some(0), "{}", stderr(&ver));
    assert!(stdout(&ver).starts_with("ok: 4 arrays of 3x4 over Z3+Z2+Z8"));
}

#[test]
fn generate_is_byte_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "generate", "--group", "Z45+Z4+Z4", "--rows", "15", "--cols", "16", "--cache-dir",
        "cache",
    ];
    let first = gmrs(&args, tmp.path());
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let second = gmrs(&args, tmp.path());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn generate_reports_infeasibility() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gmrs(&["generate", "--group", "Z6", "--rows", "2", "--cols", "3"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("violates-sylow-cyclic"), "{text}");
    assert!(text.contains("theta_note"), "{text}");
}

#[test]
fn generate_declines_unrouted_shapes_with_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gmrs(
        &["generate", "--group", "Z2+Z2+Z27", "--rows", "6", "--cols", "2"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("not constructed"));
}

#[test]
fn generate_rejects_bad_arguments() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["generate", "--group", "Q8", "--rows", "2", "--cols", "2"],
        &["generate", "--group", "Z6", "--rows", "4", "--cols", "3"],
        &["generate", "--group", "Z6", "--rows", "2", "--cols", "3", "--count", "7"],
    ];
    for args in cases {
        let out = gmrs(args, tmp.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn verify_flags_corruption_and_parse_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = tmp.path().join("set.json");
    let gen = gmrs(
        &[
            "generate", "--group", "Z2+Z2", "--rows", "2", "--cols", "2", "--out",
            out_path.to_str().unwrap(), "--cache-dir", "cache",
        ],
        tmp.path(),
    );
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));

    // Duplicate one entry: coverage must flag it.
    let text = std::fs::read_to_string(&out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut corrupted = doc.clone();
    corrupted["arrays"][0][0][0] = doc["arrays"][0][0][1].clone();
    std::fs::write(&out_path, serde_json::to_string(&corrupted).unwrap()).unwrap();
    let ver = gmrs(&["verify", out_path.to_str().unwrap()], tmp.path());
    assert_eq!(ver.status.code(), Some(1));
    assert!(stdout(&ver).contains("coverage-duplicate"), "{}", stdout(&ver));

    std::fs::write(&out_path, "{ not json").unwrap();
    let ver = gmrs(&["verify", out_path.to_str().unwrap()], tmp.path());
    assert_eq!(ver.status.code(), Some(2));
}

#[test]
fn feasible_prints_verdicts_with_matching_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let yes = gmrs(&["feasible", "--group", "Z8", "--rows", "2", "--cols", "4"], tmp.path());
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("\"reason\":\"both-even\""), "{}", stdout(&yes));

    let no = gmrs(&["feasible", "--group", "Z2+Z2+Z3", "--rows", "2", "--cols", "3"], tmp.path());
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).contains("\"reason\":\"violates-2xodd\""), "{}", stdout(&no));
}

#[test]
fn oracle_confirms_the_classifier() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gmrs(&["oracle", "--group", "Z6", "--rows", "2", "--cols", "3"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("nonexistent") && text.ends_with("agreement\n"), "{text}");

    let big = gmrs(&["oracle", "--group", "Z5+Z5", "--rows", "5", "--cols", "5"], tmp.path());
    assert_eq!(big.status.code(), Some(2), "cap must bound the oracle");
}

#[test]
fn csv_and_pretty_formats_render_every_row() {
    let tmp = tempfile::tempdir().unwrap();
    let base = [
        "generate", "--group", "Z3+Z2+Z8", "--rows", "3", "--cols", "4", "--cache-dir", "cache",
    ];
    let csv = gmrs(&[&base[..], &["--format", "csv"]].concat(), tmp.path());
    assert_eq!(csv.status.code(), Some(0), "{}", stderr(&csv));
    let csv_text = stdout(&csv);
    let lines: Vec<&str> = csv_text.lines().collect();
    assert_eq!(lines.len(), 4 * 3, "one line per (array, row)");
    assert!(lines[0].starts_with("0,0,"));
    assert_eq!(lines[0].split(',').count(), 2 + 4);
    assert_eq!(lines[0].matches(';').count(), 4 * 2, "three coordinates per cell");

    let pretty = gmrs(&[&base[..], &["--format", "pretty"]].concat(), tmp.path());
    assert_eq!(pretty.status.code(), Some(0));
    let text = stdout(&pretty);
    assert!(text.starts_with("set over Z3+Z2+Z8: 4 arrays of 3x4"), "{text}");
    assert_eq!(text.matches("array ").count(), 4, "{text}");
}

#[test]
fn cache_dir_env_variable_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let cache_dir = tmp.path().join("env-cache");
    let out = Command::new(env!("CARGO_BIN_EXE_gmrs"))
        .args(["generate", "--group", "Z5+Z2+Z2", "--rows", "5", "--cols", "4"])
        .current_dir(tmp.path())
        .env("MRS_CACHE_DIR", &cache_dir)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(cache_dir.is_dir(), "cache entries should land under $MRS_CACHE_DIR");
}
