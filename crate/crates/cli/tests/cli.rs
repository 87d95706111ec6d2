mod common;

use common::{data, reverify, run, run_json, run_raw, DETERMINISTIC, EMITTERS};
use serde_json::Value;

#[test]
fn emitted_certificates_reverify() {
    for (command, file, extra) in EMITTERS {
        let (code, report) = run_json(&[command], file, extra);
        assert_eq!(code, 0, "{command} on {file}: {report}");
        let (code, verdict) = reverify(&report);
        assert_eq!(code, 0, "{command} certificate rejected: {verdict}");
        assert_eq!(verdict["status"], "holds");
    }
}

#[test]
fn tampered_cox_lift_is_rejected() {
    let (_, mut report) = run_json(&["cox-lift"], "dp6-s4-lift.json", &[]);
    let signs = &mut report["certificate"]["certificate"]["generators"][0]["signs"][0];
    *signs = Value::from(-signs.as_i64().unwrap());
    let (code, _) = reverify(&report);
    assert_eq!(code, 1);
}

#[test]
fn tampered_section_is_rejected() {
    let (_, mut report) = run_json(&["split"], "c2-split.json", &[]);
    report["certificate"]["certificate"]["section"] = serde_json::json!([[0], [1], [0]]);
    let (code, _) = reverify(&report);
    assert_eq!(code, 1);
}

#[test]
fn json_output_is_deterministic() {
    for (command, file, extra) in DETERMINISTIC {
        let first = run_raw(command, file, extra);
        let second = run_raw(command, file, extra);
        assert_eq!(first, second, "{command:?} differs between runs");
        let threaded = run_raw(command, file, &[extra, &["--threads", "1"]].concat());
        assert_eq!(first, threaded, "{command:?} depends on the thread count");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run_json(&["h1"], "sign-c2.json", &[]).0, 0);
    // the sign lattice is not a permutation lattice
    let (code, report) = run_json(&["perm-check"], "sign-c2.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(report["exit_code"], 1);
    assert_eq!(run_json(&["split"], "dp6-split.json", &[]).0, 1);
    assert_eq!(run_json(&["lift-check"], "klein-p1.json", &[]).0, 1);
    assert_eq!(run_json(&["stably-perm"], "dp5-certificate.json", &["--bound", "0"]).0, 2);
    let (code, report) = run_json(&["h1"], "missing.json", &[]);
    assert_eq!((code, report["error"]["kind"].as_str()), (3, Some("io")));
}

#[test]
fn unexpected_task_answer_fails() {
    let doc = r#"{"group": {"name": "C2"}, "lattices": [{"name": "sign", "rank": 1, "generators": [[[-1]]]}],
                  "tasks": [{"op": "h1", "lattice": "sign", "expect": "0"}]}"#;
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), doc).unwrap();
    let (code, out) = run(&["h1", "--input", &file.path().to_string_lossy()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("Z/2"));
}

#[test]
fn unknown_fields_are_rejected() {
    let doc = r#"{"group": {"name": "C2"}, "lattices": [{"name": "t", "rank": 1, "generators": [[[1]]], "colour": 3}]}"#;
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), doc).unwrap();
    let (code, out) = run(&["info", "--json", "--input", &file.path().to_string_lossy()]);
    assert_eq!(code, 3);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["error"]["kind"], "schema");
}

#[test]
fn non_unimodular_generator_is_an_error() {
    let doc = r#"{"group": {"name": "C2"}, "lattices": [{"name": "t", "rank": 1, "generators": [[[2]]]}]}"#;
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), doc).unwrap();
    let (code, _) = run(&["h1", "--input", &file.path().to_string_lossy()]);
    assert_eq!(code, 3);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&["no-such-command"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, out) = run(&["h1", "--json", "--deadline", "-1", "--input", &data("sign-c2.json")]);
    assert_eq!(code, 3);
    assert!(out.contains("\"usage\""));
}

#[test]
fn catalog_lists_and_runs_bundles() {
    let (code, out) = run(&["catalog"]);
    assert_eq!(code, 0);
    for name in stablin::catalog::BUNDLE_NAMES {
        assert!(out.contains(name));
    }
    let (code, out) = run(&["catalog", "p1-amitsur"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS amitsur"));
    let (code, _) = run(&["catalog", "nonexistent"]);
    assert_eq!(code, 3);
}

#[test]
fn lift_check_reports_the_klein_class() {
    let (code, report) = run_json(&["lift-check"], "klein-p1.json", &[]);
    assert_eq!(code, 1);
    let text = report.to_string();
    assert!(text.contains("\"class_order\":2"), "{text}");
}

#[test]
fn twist_keeps_invariants() {
    let (code, report) = run_json(&["twist"], "s3-sum-zero.json", &["--lattice", "roots"]);
    assert_eq!(code, 0, "{report}");
    let (code, report) = run_json(&["twist"], "dp5-certificate.json", &[]);
    assert_eq!(code, 0, "{report}");
}
