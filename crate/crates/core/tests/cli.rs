use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ffot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffot"))
        .args(args)
        .env_remove("FFOT_TIME_BUDGET_MS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ffot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn compute_example_inputs() {
    let m = fixture("example.ffot");
    let o = ffot(&["compute", &m, "--input", "I_pos", "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("O_pos"));
    let o = ffot(&["compute", &m, "--input", "I_neg", "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("O_neg"));
}

#[test]
fn overlapping_outputs_are_undefined() {
    let o = ffot(&["compute", &fixture("example_mutated.ffot"), "--input", "I_pos", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validate_flags_the_mutant() {
    assert_eq!(ffot(&["validate", &fixture("example.ffot"), "--max-size", "3"]).status.code(), Some(0));
    assert_eq!(ffot(&["validate", &fixture("example_mutated.ffot"), "--max-size", "3"]).status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(ffot(&["compute"]).status.code(), Some(2));
    assert_eq!(ffot(&["compute", "/nonexistent.ffot", "--input", "x"]).status.code(), Some(2));
    let bad = scratch("bad.ffot");
    std::fs::write(&bad, "[vocabulary]\nrelation R/1\n[theory]\nR(d)\n").unwrap();
    let o = ffot(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn standard_structures_check() {
    let good = scratch("psa_f3.txt");
    let o = ffot(&["build", "psa_f", "3"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&good, &o.stdout).unwrap();
    let o = ffot(&["check-model", good.to_str().unwrap(), "--axioms", "psa_f"]);
    assert_eq!(o.status.code(), Some(0));
    let o = ffot(&["check-model", good.to_str().unwrap(), "--axioms", "psa"]);
    assert_eq!(o.status.code(), Some(1), "the chain end is a fixed point of S");
}

#[test]
fn no_finite_successor_model() {
    let o = ffot(&["min-size", "--axioms", "psa", "--max", "4"]);
    assert_eq!(o.status.code(), Some(4));
    let o = ffot(&["min-size", "--axioms", "psa_f", "--max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains('2'));
}

#[test]
fn axiom_listing() {
    let o = ffot(&["axioms", "dof"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 16);
    assert_eq!(ffot(&["axioms", "eq"]).status.code(), Some(2));
    let o = ffot(&["axioms", "eq", "--over", &fixture("example.ffot")]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn compiled_parity_machine() {
    let out = scratch("parity.ffot");
    let o = ffot(&["compile-tm", &fixture("parity.tmspec"), "--finite", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m = out.to_str().unwrap();
    let o = ffot(&["compute", m, "--word", "11", "--max-size", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("accept"));
    // Six steps need seven elements.
    assert_eq!(ffot(&["compute", m, "--word", "11", "--max-size", "6"]).status.code(), Some(4));
    let o = ffot(&["simulate", &fixture("parity.tmspec"), "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn report_lines() {
    let report = scratch("report.jsonl");
    let _ = std::fs::remove_file(&report);
    let r = report.to_str().unwrap();
    let m = fixture("example.ffot");
    ffot(&["--report", r, "compute", &m, "--input", "I_pos", "--max-size", "3"]);
    ffot(&["--report", r, "compute", &m, "--input", "I_pos", "--max-size", "3", "--jobs", "3"]);
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&report)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["command"][2], "compute");
    assert_eq!(lines[0]["exit_code"], 0);
    assert_eq!(lines[0]["payload"], lines[1]["payload"]);
    assert_eq!(lines[0]["inputs_digest"], lines[1]["inputs_digest"]);
}
