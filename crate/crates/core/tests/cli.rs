use std::fs;
use std::path::Path;

use gftv::cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};

fn gftv(args: &[&str]) -> i32 {
    run(std::iter::once("gftv").chain(args.iter().copied()).map(String::from))
}

fn gftv_to(out: &Path, args: &[&str]) -> (i32, String) {
    let mut all: Vec<&str> = args.to_vec();
    let path = out.to_str().unwrap();
    all.extend(["--output", path]);
    let code = gftv(&all);
    (code, fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn bounds_prints_reduced_constant() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = gftv_to(&dir.path().join("b"), &["bounds", "--theorem", "t21", "--p", "1", "--n", "1", "--alpha", "0"]);
    assert_eq!(code, EXIT_OK);
    let row = text.lines().find(|l| l.starts_with("t21")).unwrap();
    assert_eq!(row.split_whitespace().nth(1), Some("0.5"));
}

#[test]
fn bounds_records() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = gftv_to(
        &dir.path().join("b"),
        &["bounds", "--theorem", "t24", "--lambda", "1.5", "--format", "records"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("theorem=t24\t"));
    assert!(text.contains("bound=1.3000000000000000e0"), "{text}");
    assert!(text.contains("lambda_range\tp=1\tn=1\tvalid=true\tlambda1=1\tlambda2=3"));
}

#[test]
fn invalid_lambda_range_is_a_usage_error() {
    assert_eq!(gftv(&["bounds", "--theorem", "t24", "--p", "2", "--n", "1"]), EXIT_USAGE);
}

#[test]
fn oracle_agrees_with_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = gftv_to(
        &dir.path().join("o"),
        &["oracle", "--theorem", "t24", "--p", "1", "--n", "1", "--lambda", "1.5", "--theta-samples", "200000", "--format", "records"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("closed_form=1.3000000000000000e0"));
    assert!(text.contains("ok=true"));
}

#[test]
fn oracle_mismatch_exits_one() {
    let code = gftv(&["oracle", "--theorem", "t21", "--alpha", "0.5", "--m", "2", "--oracle-tol", "1e-9"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
}

#[test]
fn usage_errors() {
    assert_eq!(gftv(&["bounds", "--nonsense"]), EXIT_USAGE);
    assert_eq!(gftv(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(gftv(&["oracle"]), EXIT_USAGE);
    assert_eq!(gftv(&["verify", "--theorem", "t21"]), EXIT_USAGE);
    assert_eq!(gftv(&["verify", "--theorem", "t21", "--coeffs", "2:abc"]), EXIT_USAGE);
    assert_eq!(gftv(&["verify", "--theorem", "t21", "--n", "2", "--coeffs", "2:0.1"]), EXIT_USAGE);
    assert_eq!(gftv(&["oracle", "--theorem", "t21", "--alpha", "1.5"]), EXIT_USAGE);
    assert_eq!(gftv(&["bounds", "--config", "/nonexistent/gftv.toml"]), EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    assert_eq!(gftv(&["--help"]), EXIT_OK);
    assert_eq!(gftv(&["sweep", "--help"]), EXIT_OK);
}

#[test]
fn verify_reports_status() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = gftv_to(
        &dir.path().join("v"),
        &["verify", "--theorem", "t21", "--coeffs", "2:0.1", "--format", "records"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("status=BOTH_HOLD"), "{text}");

    let (code, text) = gftv_to(
        &dir.path().join("w"),
        &["verify", "--theorem", "t21", "--named", "monomial-pair(0.45)", "--format", "records"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("status=VACUOUS"), "{text}");
}

/// Exit code 2 exactly when the report is a violation.
#[test]
fn verify_exit_code_tracks_violation() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = gftv_to(
        &dir.path().join("v"),
        &["verify", "--theorem", "t22", "--alpha", "0", "--coeffs", "2:0.3", "--format", "records"],
    );
    let violated = text.contains("status=VIOLATION");
    assert_eq!(code == EXIT_VIOLATION, violated);
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep", "--theorems", "t24,t21", "--alphas", "0.5,0", "--lambdas", "1.5", "--count", "12", "--samples", "512",
        "--format", "records",
    ];
    let (c1, a) = gftv_to(&dir.path().join("a"), &args);
    let (c2, b) = gftv_to(&dir.path().join("b"), &args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let summaries: Vec<&str> = a.lines().filter(|l| l.starts_with("summary")).collect();
    assert_eq!(summaries.len(), 3);
    assert!(summaries[0].contains("theorem=t21\tp=1\tn=1\talpha=0\t"));
    assert!(summaries[1].contains("alpha=0.5"));
    assert!(summaries[2].contains("theorem=t24"));
    assert_eq!(a.lines().count(), 3 * 12 + 3);
}

#[test]
fn sweep_over_saved_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.corpus");
    let (code, _) = gftv_to(&corpus, &["generate", "--count", "8", "--named", "identity", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    let (code, text) = gftv_to(
        &dir.path().join("s"),
        &["sweep", "--theorems", "t22", "--corpus", corpus.to_str().unwrap(), "--samples", "256", "--summary-only"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.lines().any(|l| l.starts_with("t22") && l.split_whitespace().nth(5) == Some("9")), "{text}");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gftv.toml");
    fs::write(&cfg, "samples = 256\n[sweep]\ncount = 5\nalphas = [0.0, 0.25]\ntheorems = \"t21\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (code, text) = gftv_to(&dir.path().join("a"), &["--config", cfg, "sweep", "--format", "records"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(text.lines().filter(|l| l.starts_with("summary")).count(), 2);
    assert!(text.contains("samples=256"));
    assert!(text.contains("total=5"));

    let (code, text) = gftv_to(&dir.path().join("b"), &["--config", cfg, "sweep", "--count", "3", "--format", "records"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("total=3"));

    fs::write(dir.path().join("bad.toml"), "[sweep]\nno_such_flag = 1\n").unwrap();
    let bad = dir.path().join("bad.toml");
    assert_eq!(gftv(&["--config", bad.to_str().unwrap(), "sweep"]), EXIT_USAGE);
}

#[test]
fn search_valence_and_jack() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = gftv_to(
        &dir.path().join("s"),
        &["search", "--theorem", "t21", "--trials", "50", "--samples", "512", "--format", "records"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("witness=none"));

    let (code, text) = gftv_to(
        &dir.path().join("v"),
        &["valence", "--p", "2", "--coeffs", "3:0.2:-0.1", "--format", "records"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("winding=2"));

    // z + 3z^2 vanishes at -1/3
    assert_eq!(gftv(&["valence", "--coeffs", "2:3"]), EXIT_CHECK_FAILED);

    let (code, text) = gftv_to(&dir.path().join("j"), &["jack", "--order", "3", "--seed", "4", "--format", "records"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("order=3"));
    assert!(text.contains("ok=true"));
}
