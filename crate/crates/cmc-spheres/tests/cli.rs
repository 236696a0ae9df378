//! Binary-level contract tests: exit codes, file schemas, SVG validity.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmc-spheres"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

/// Minimal XML well-formedness check: single root, balanced tags, quoted
/// attributes consumed without structural surprises.
fn xml_well_formed(text: &str) -> bool {
    let mut rest = text.trim_start();
    if let Some(after) = rest.strip_prefix("<?xml") {
        let Some(end) = after.find("?>") else {
            return false;
        };
        rest = after[end + 2..].trim_start();
    }
    let mut stack: Vec<String> = Vec::new();
    let mut roots = 0usize;
    let mut chars = rest.char_indices().peekable();
    let bytes = rest;
    while let Some((i, c)) = chars.next() {
        if c != '<' {
            continue;
        }
        let Some(close) = bytes[i..].find('>') else {
            return false;
        };
        let tag = &bytes[i + 1..i + close];
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some(open) if open == name.trim() => {}
                _ => return false,
            }
            if stack.is_empty() {
                roots += 1;
            }
        } else if !tag.ends_with('/') {
            let name: String = tag.split_whitespace().next().unwrap_or("").to_string();
            if name.is_empty() {
                return false;
            }
            stack.push(name);
        } else if stack.is_empty() {
            roots += 1;
        }
        // Skip to the end of this tag.
        while let Some(&(j, _)) = chars.peek() {
            if j > i + close {
                break;
            }
            chars.next();
        }
    }
    stack.is_empty() && roots == 1
}

#[test]
fn solve_writes_json_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve", "--n", "3", "--l", "1", "--H", "0", "--scan", "0.05,0.5",
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("solve.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["manifest"]["tool"], "cmc-spheres");
    assert!(json["manifest"]["command"]
        .as_str()
        .unwrap()
        .contains("solve"));
    assert_eq!(json["manifest"]["family"]["n"], 3);
    assert_eq!(json["manifest"]["tolerances"]["newton"], 1e-10);
    let a = json["point"]["a"].as_f64().unwrap();
    assert!((a - 0.187605).abs() < 1e-4);
    // Lossless numeric round trip through the schema.
    let reparsed: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&json).unwrap()).unwrap();
    assert_eq!(reparsed["point"]["a"].as_f64().unwrap(), a);
}

#[test]
fn solve_from_guesses_converges_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--n",
            "3",
            "--l",
            "1",
            "--H",
            "0",
            "--a-guess",
            "0.187605",
            "--t-guess",
            "1.15925",
        ],
    );
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("solve.json")).unwrap())
            .unwrap();
    assert!(json["iterations"].as_u64().unwrap() <= 2);
}

#[test]
fn missing_arguments_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["solve", "--n", "3", "--H", "0"]);
    assert_eq!(out.status.code(), Some(3));
    // Guesses and scan are mutually required groups.
    let out = run_in(dir.path(), &["solve", "--n", "3", "--l", "1", "--H", "0"]);
    assert_eq!(out.status.code(), Some(3));
    // Invalid family.
    let out = run_in(
        dir.path(),
        &[
            "solve", "--n", "3", "--l", "9", "--H", "0", "--scan", "0.05,0.5",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn volume_rejects_untabulated_twin_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["volume", "--n", "4", "--l", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("(4,1)"), "stderr: {err}");
}

#[test]
fn no_bracket_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--n",
            "3",
            "--l",
            "1",
            "--H",
            "0",
            "--scan",
            "0.25,0.45",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_files_match_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "profile",
            "--n",
            "3",
            "--l",
            "1",
            "--a",
            "0.1876",
            "--H",
            "0",
            "--t",
            "1.159",
            "--svg",
            "profile.svg",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,f1,f2,theta,f,g,h");
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0.0);
    assert_eq!(first[1], 0.0);
    assert!((first[2] - 0.187605).abs() < 1e-4);
    assert_eq!(first[3], 0.0);

    // The half-period row satisfies the boundary conditions.
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let mid = &rows[rows.len() / 2];
    assert!(mid[1].abs() < 1e-8, "f1(T) = {}", mid[1]);
    assert!(
        (mid[3] - std::f64::consts::PI).abs() < 1e-8,
        "theta(T) = {}",
        mid[3]
    );

    let svg = std::fs::read_to_string(dir.path().join("profile.svg")).unwrap();
    assert!(xml_well_formed(&svg), "profile.svg not well-formed");
    assert!(svg.contains("viewBox=\""));
    assert!(svg.contains(" Z\""), "profile path should close");

    assert!(dir.path().join("profile.json").exists());
}

#[test]
fn trace_outputs_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "trace",
            "--n",
            "3",
            "--l",
            "1",
            "--max-points",
            "40",
            "--svg-prefix",
            "gamma",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(dir.path().join("gamma.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "idx,a,H,T,tan_a,tan_H,tan_T,res_f1,res_theta"
    );
    let rows = lines.count();

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap())
            .unwrap();
    assert_eq!(json["n_points"].as_u64().unwrap() as usize, rows);

    for name in ["gamma_TH.svg", "gamma_aH.svg"] {
        let svg = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(xml_well_formed(&svg), "{name} not well-formed");
        assert!(svg.contains("viewBox=\""));
    }
}

#[test]
fn trace_62_reproduces_reference_h_min() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["trace", "--n", "6", "--l", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap())
            .unwrap();
    let h_min = json["special"]["H_min"].as_f64().unwrap();
    assert!((h_min - (-0.12072)).abs() < 1e-3, "H_min = {h_min}");
}

#[test]
fn table_reports_rows_and_per_pair_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["table", "--pairs", "(3,1),(4,9)"]);
    assert!(out.status.success(), "table should still be emitted");
    let text = stdout(&out);
    let row31 = text.lines().find(|l| l.starts_with("| (3,1) |")).unwrap();
    assert!(row31.contains("| ok |"), "row: {row31}");
    let row49 = text.lines().find(|l| l.starts_with("| (4,9) |")).unwrap();
    assert!(row49.contains("error"), "row: {row49}");
    assert!(dir.path().join("table.json").exists());
}

#[test]
fn table_with_empty_pairs_is_empty_and_ok() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["table", "--pairs", ""]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("| (n,l) |"));
    // Header plus separator only.
    assert_eq!(text.lines().filter(|l| l.starts_with('|')).count(), 2);

    let out = run_in(dir.path(), &["table", "--pairs", "3,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn xml_checker_rejects_malformed_documents() {
    assert!(xml_well_formed("<svg><g><path/></g></svg>"));
    assert!(!xml_well_formed("<svg><g></svg></g>"));
    assert!(!xml_well_formed("<svg/><svg/>"));
    assert!(!xml_well_formed("<svg><g>"));
}
