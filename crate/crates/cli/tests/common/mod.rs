#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn run(args: &[&str]) -> (i32, String) {
    stablin_cli::run_command(args.iter().copied())
}

/// Runs a command with `--json` on a data file and parses the report.
pub fn run_json(command: &[&str], file: &str, extra: &[&str]) -> (i32, Value) {
    let input = data(file);
    let mut args: Vec<&str> = command.to_vec();
    args.extend(["--json", "--input", input.as_str()]);
    args.extend_from_slice(extra);
    let (code, out) = run(&args);
    let report = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: not JSON ({e}): {out}"));
    (code, report)
}

/// Writes the certificate document of a report to a temporary file and runs
/// `verify-cert` on it.
pub fn reverify(report: &Value) -> (i32, Value) {
    let cert = report
        .get("certificate")
        .unwrap_or_else(|| panic!("no certificate in {report}"));
    let file = tempfile::NamedTempFile::new().expect("temp file");
    std::fs::write(file.path(), serde_json::to_string(cert).unwrap()).expect("write certificate");
    let path = file.path().to_string_lossy().into_owned();
    let (code, out) = run(&["verify-cert", "--json", "--input", &path]);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}")))
}

/// Commands that emit certificates, with the document and extra flags.
pub const EMITTERS: [(&str, &str, &[&str]); 4] = [
    ("perm-check", "c2-skew.json", &[]),
    ("stably-perm", "dp5-certificate.json", &[]),
    ("split", "c2-split.json", &[]),
    ("cox-lift", "dp6-s4-lift.json", &[]),
];

/// Commands checked for byte-identical output across runs.
pub const DETERMINISTIC: [(&[&str], &str, &[&str]); 6] = [
    (&["poly-verify"], "quadric.json", &["--seed", "7"]),
    (&["catalog", "weyl-g2"], "quadric.json", &["--seed", "7"]),
    (&["h1"], "s3-sum-zero.json", &[]),
    (&["lift-check"], "klein-p1.json", &[]),
    (&["cox-lift"], "dp6-s4-lift.json", &[]),
    (&["perm-check"], "c2-skew.json", &[]),
];

pub fn run_raw(command: &[&str], file: &str, extra: &[&str]) -> (i32, String) {
    let input = data(file);
    let mut args: Vec<&str> = command.to_vec();
    args.extend(["--json", "--input", input.as_str()]);
    args.extend_from_slice(extra);
    run(&args)
}
