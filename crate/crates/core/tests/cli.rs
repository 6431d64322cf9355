use std::process::{Command, Output};

use radclean::cli::{
    ClassifyReport, ErrorReport, LiftReport, NormalizeReport, RootsReport, SolveReport,
    TracePropertyReport,
};
use radclean::oracle::OracleReport;
use serde::de::DeserializeOwned;

fn radclean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radclean"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = radclean(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Parses the JSON report and checks it serializes back to the same bytes.
fn report<T: DeserializeOwned + serde::Serialize>(args: &[&str]) -> T {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let text = stdout(&full);
    let value: T = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", text);
    value
}

fn text_field(text: &str, key: &str) -> String {
    let prefix = format!("{key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_owned()
}

#[test]
fn classify_verdicts() {
    let r: ClassifyReport = report(&["classify", "--ring", "Zmod:4", "--matrix", "2,3;0,2"]);
    assert!(r.strongly_clean);
    assert!(!r.strongly_rad_clean);

    let r: ClassifyReport = report(&["classify", "--ring", "Padic:2:32", "--matrix", "1,1;1,1"]);
    assert!(!r.strongly_rad_clean);

    let r: ClassifyReport = report(&["classify", "--ring", "Zloc:3", "--matrix", "2,1;-1,1"]);
    assert!(!r.strongly_rad_clean);
    assert_eq!(r.trace, "3");
    assert_eq!(r.det, "3");
}

#[test]
fn text_and_json_agree() {
    let cases: [&[&str]; 4] = [
        &["classify", "--ring", "Zmod:4", "--matrix", "2,3;0,2"],
        &["classify", "--ring", "Zmod:9", "--matrix", "0,-3;1,1"],
        &[
            "classify",
            "--ring",
            "Series(Zmod:4;3)",
            "--matrix",
            "[0,1],[2];[1],[3,2]",
        ],
        &["classify", "--ring", "Zloc:3", "--matrix", "0,-3;1,-1"],
    ];
    for args in cases {
        let json: ClassifyReport = report(args);
        let text = stdout(args);
        assert_eq!(
            text_field(&text, "strongly_rad_clean"),
            json.strongly_rad_clean.to_string()
        );
        assert_eq!(
            text_field(&text, "strongly_clean"),
            json.strongly_clean.to_string()
        );
        assert_eq!(text_field(&text, "det"), json.det);
    }
}

#[test]
fn witness_is_printed_on_request() {
    let r: ClassifyReport = report(&[
        "classify",
        "--ring",
        "Zmod:9",
        "--matrix",
        "0,-3;1,1",
        "--witness",
    ]);
    let w = r.witness.expect("witness");
    assert_eq!(w.verified.len(), 5);
    let text = stdout(&[
        "classify",
        "--ring",
        "Zmod:9",
        "--matrix",
        "0,-3;1,1",
        "--witness",
    ]);
    assert!(text.contains("verified: [E^2=E, A=E+U, EA=AE, U in GL2, EAE in M2(J)]"));
    let r: ClassifyReport = report(&["classify", "--ring", "Zmod:9", "--matrix", "0,-3;1,1"]);
    assert!(r.witness.is_none());
}

#[test]
fn solvers() {
    let r: RootsReport = report(&["roots", "--ring", "Zmod:4", "--mu", "-3", "--lambda", "2"]);
    assert_eq!((r.alpha.as_str(), r.beta.as_str()), ("2", "1"));

    let s: SolveReport = report(&["solve", "--ring", "Padic:3:10", "--c", "3"]);
    let x: i64 = s.x.parse().unwrap();
    assert_eq!((x * x + x - 3).rem_euclid(59049), 0);

    let l: LiftReport = report(&[
        "lift",
        "--ring",
        "Series(Zmod:4;3)",
        "--mu",
        "1",
        "--lambda",
        "[0,2]",
        "--b0",
        "0",
    ]);
    assert_eq!(l.root, "[0,2,0]");
    assert!(l.residual_zero);
}

#[test]
fn trace_property_reports() {
    let t: TracePropertyReport = report(&["trace-property", "--ring", "Zmod:4"]);
    assert!(t.holds);
    let t: TracePropertyReport = report(&["trace-property", "--ring", "Zloc:3"]);
    assert!(!t.holds);
    let c = t.counterexample.unwrap();
    assert_eq!((c.lambda.as_str(), c.mu.as_str()), ("3", "1"));
    let text = stdout(&["trace-property", "--ring", "Zloc:3"]);
    assert!(text.contains("holds: false\n"));
    assert!(text.contains("matrix: 0,-3;1,-1\n"));
}

#[test]
fn oracle_report() {
    let r: OracleReport = report(&["oracle", "--ring", "Zmod:4"]);
    assert_eq!(r.total_matrices, 256);
    assert!(r.is_clean());
    let q: OracleReport = report(&["oracle", "--ring", "Zmod:4", "--check", "quasipolar"]);
    assert!(q.tallies.rad_clean.is_none());
    assert!(q.tallies.quasipolar.is_some());
    assert!(q.compared.is_empty());
}

#[test]
fn normalize_report() {
    let n: NormalizeReport = report(&["normalize", "--ring", "Zmod:9", "--matrix", "1,0;1,3"]);
    assert!(n.similar);
    assert_eq!(
        n.form,
        [["0", "6"], ["1", "4"]].map(|r| r.map(String::from))
    );
}

#[test]
fn failures_are_structured() {
    let cases: [(&[&str], i32, &str); 6] = [
        (
            &["classify", "--ring", "Zmod:12", "--matrix", "1,0;0,1"],
            2,
            "invalid-spec",
        ),
        (
            &["classify", "--ring", "Zloc:3", "--matrix", "1/3,0;0,1"],
            2,
            "denominator-not-unit",
        ),
        (
            &["normalize", "--ring", "Zmod:4", "--matrix", "1,2;2,1"],
            3,
            "precondition-violated",
        ),
        (
            &["solve", "--ring", "Zloc:3", "--c", "3"],
            3,
            "not-solvable",
        ),
        (
            &[
                "lift",
                "--ring",
                "Series(Zmod:4;3)",
                "--mu",
                "2",
                "--lambda",
                "0",
                "--b0",
                "0",
            ],
            3,
            "not-simple-root",
        ),
        (&["oracle", "--ring", "Zmod:27"], 4, "budget-exceeded"),
    ];
    for (args, code, kind) in cases {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let out = radclean(&full);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty());
        let e: ErrorReport = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(e.error, kind, "{args:?}");
        assert_eq!(e.exit_code, code);
    }
    assert_eq!(
        radclean(&["classify", "--ring", "Zmod:4"]).status.code(),
        Some(2)
    );
}
