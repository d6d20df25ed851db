//! Behavior of the installed binary: exit codes, output determinism, and
//! the report-string consistency contract.

use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_traits::One;
use trigdet_core::bigfloat::BigFloat;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigdet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to_file(args: &[&str], path: &Path) -> Output {
    let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    full.push("--output".into());
    full.push(path.display().to_string());
    Command::new(env!("CARGO_BIN_EXE_trigdet"))
        .args(&full)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_code_0_on_pass() {
    let out = run(&["verify", "cot-theorem", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"status\":\"pass\""));
}

#[test]
fn exit_code_1_on_verification_failure() {
    // The tangent-ratio scan row at n = 5 rounds to -2: an honest fail.
    let out = run(&["verify", "sun-tan-scan", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"status\":\"fail\""));
}

#[test]
fn exit_code_2_on_usage_errors() {
    assert_eq!(run(&["verify", "no-such-identity", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "tan-theorem", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "csc-cp", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["classnumber", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["det", "--kind", "tan", "--n", "8"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "cot-theorem", "--from", "9", "--to", "3"]).status.code(), Some(2));
    // clap-level usage errors also exit 2.
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn exit_code_3_when_precision_exhausted() {
    // 64 bits cannot certify a 1e-20 identity at n = 43; the single-rung
    // explicit-precision ladder ends in a skip.
    let out = run(&["verify", "cot-theorem", "--n", "43", "--precision", "64"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"status\":\"skipped\""));
    assert!(stdout.contains("precision exhausted"));
}

#[test]
fn scan_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.jsonl");
    let f2 = dir.path().join("b.jsonl");
    let o1 = run_to_file(&["scan", "csc-cp", "--from", "3", "--to", "23"], &f1);
    let o2 = run_to_file(&["scan", "csc-cp", "--from", "3", "--to", "23"], &f2);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0));
    let b1 = std::fs::read(&f1).unwrap();
    let b2 = std::fs::read(&f2).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, b2, "scan output must be deterministic");
}

#[test]
fn scan_reports_are_sorted_and_filtered() {
    let out = run(&["scan", "csc-theorem", "--from", "3", "--to", "20"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let ns: Vec<u64> = stdout
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["n"].as_u64().unwrap())
        .collect();
    // Odd n only, ascending.
    assert_eq!(ns, vec![3, 5, 7, 9, 11, 13, 15, 17, 19]);
}

#[test]
fn csv_format_has_header_and_rows() {
    let out = run(&["verify", "wang-maillet", "--n", "7", "--format", "csv"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "identity,n,lhs,rhs,abs_err,rel_err,precision_bits,status,detail"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("wang-maillet,7,"));
    assert!(row.contains("pass"));
}

#[test]
fn json_reports_have_full_schema_and_30_digits() {
    let out = run(&["verify", "guo-prime-cot", "--n", "11"]);
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    for key in [
        "identity", "n", "lhs", "rhs", "abs_err", "rel_err", "precision_bits", "status", "detail",
    ] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    let lhs = v["lhs"].as_str().unwrap();
    let digits = lhs.chars().filter(|c| c.is_ascii_digit()).count();
    assert!(digits >= 30, "lhs carries {digits} digits: {lhs}");
}

#[test]
fn rel_err_consistent_with_printed_sides() {
    // Recompute the relative error from the printed 33-digit strings; it
    // must agree with the printed rel_err to about one unit in the last
    // printed place (scaled), for a mix of identities.
    let cases: [&[&str]; 4] = [
        &["verify", "cot-theorem", "--n", "12"],
        &["verify", "tan-theorem", "--n", "15"],
        &["verify", "guo-prime-cot", "--n", "13"],
        &["verify", "sun-tan-scan", "--n", "9"],
    ];
    for args in cases {
        let out = run(args);
        let v: serde_json::Value =
            serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
        let p = 256;
        let lhs = BigFloat::from_decimal_str(v["lhs"].as_str().unwrap(), p).unwrap();
        let rhs = BigFloat::from_decimal_str(v["rhs"].as_str().unwrap(), p).unwrap();
        let rel = BigFloat::from_decimal_str(v["rel_err"].as_str().unwrap(), p).unwrap();
        let scale = lhs.abs().max_by_value(rhs.abs());
        let from_strings = if scale.is_zero() {
            lhs.sub(&rhs).abs()
        } else {
            lhs.sub(&rhs).abs().div(&scale)
        };
        // One unit in the 33rd significant digit of the sides, relative.
        let ulp = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(10).pow(31), p);
        let diff = from_strings.sub(&rel).abs();
        assert!(
            diff.cmp_value(&ulp) != std::cmp::Ordering::Greater,
            "{args:?}: string rel {} vs reported {}",
            from_strings.to_decimal_string(8),
            v["rel_err"]
        );
    }
}

#[test]
fn classnumber_reports_supporting_data() {
    let out = run(&["classnumber", "--n", "23"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(v["h_minus"], "3");
    assert_eq!(v["q"], 1);
    assert_eq!(v["w"], 46);
    assert_eq!(v["conductor_product"], "952809757913927");
}

#[test]
fn chars_lists_canonical_labels() {
    let out = run(&["chars", "--n", "15"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 8);
    assert!(stdout.contains("chi[n=15; e=(1,0); f=3; odd]"));
    assert!(stdout.contains("chi[n=15; e=(1,2); f=15; odd]"));
    // Exactly half odd.
    let odd = stdout.matches("\"parity\":\"odd\"").count();
    assert_eq!(odd, 4);
}

#[test]
fn det_subcommand_matches_known_values() {
    let out = run(&["det", "--kind", "sin", "--n", "5"]);
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    let det = BigFloat::from_decimal_str(v["determinant"].as_str().unwrap(), 192).unwrap();
    let expect = BigFloat::from_ratio(&BigInt::from(5), &BigInt::from(4), 192);
    let diff = det.abs().sub(&expect).abs();
    assert!(diff.magnitude_bits().unwrap_or(i64::MIN) < -60);
    // Maillet determinant through the float path agrees with the exact one.
    let out = run(&["det", "--kind", "maillet-residue", "--n", "11", "--indexing", "inverse-product"]);
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    let det = BigFloat::from_decimal_str(v["determinant"].as_str().unwrap(), 192).unwrap();
    assert_eq!(det.to_nearest_integer().0, BigInt::from(14641));
}
