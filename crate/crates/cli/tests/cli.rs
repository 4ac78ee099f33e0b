//! Golden-file tests for the `uniserial` binary. Set `UPDATE_GOLDEN=1` to
//! rewrite the expected outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_uniserial"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
        stderr: String::from_utf8(out.stderr).expect("utf-8"),
    }
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(format!("{name}.out"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn golden(name: &str, args: &[&str], code: i32) -> Run {
    let r = run(args);
    assert_eq!(r.code, code, "stderr: {}", r.stderr);
    check_golden(name, &r.stdout);
    r
}

#[test]
fn build_char_zero() {
    let r = golden("build_char0_m3", &["build", "char0_m3.spec"], 0);
    assert!(r.stdout.contains("x = 0,0,0;0,-1,0;0,0,-2"));
    assert!(r.stdout.contains("u[1,1] = 0,1,0;0,0,1;0,0,0"));
}

#[test]
fn build_char_two() {
    let r = golden("build_char2_m4", &["build", "char2_m4.spec"], 0);
    for flag in ["representation", "admissible", "uniserial"] {
        assert!(r.stdout.contains(&format!("# {flag} = true")), "{flag}");
    }
    assert!(r.stdout.contains("# annihilated_by_derived = false"));
}

#[test]
fn build_rejects_bad_specs() {
    let r = run(&["build", "bad_normalization.spec"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("FunctionalNormalization"), "{}", r.stderr);
    let r = run(&["build", "noncanonical_y.spec"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("NotCanonicalY"), "{}", r.stderr);
    let r = run(&["build", "no_such_file.spec"]);
    assert_eq!(r.code, 2);
}

#[test]
fn build_output_round_trips_through_verify() {
    let dir = tempdir();
    let rep = dir.join("char2_m4.rep");
    let r = run(&["build", "char2_m4.spec", "--out", rep.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let v = run(&["verify", rep.to_str().unwrap()]);
    assert_eq!(v.code, 0, "{}", v.stderr);
    let built = fs::read_to_string(&rep).unwrap();
    assert!(built.starts_with(&v.stdout));
}

#[test]
fn verify_catches_corruption() {
    let r = golden("verify_corrupt", &["verify", "corrupt.rep"], 3);
    assert!(r.stdout.contains("# representation = false"));
}

#[test]
fn canon_examples() {
    let r = golden("canon_diag_f2", &["canon", "diag_f2.y"], 0);
    assert!(r.stdout.contains("canonical = 0; 0,0,0\ntransporter = 1,0,0,0\n"));
    let r = golden("canon_rational", &["canon", "rational.y"], 0);
    assert!(r.stdout.contains("canonical = 1/2; 0,0,0\n"));
    let r = golden("canon_d_plus_j_f2", &["canon", "d_plus_j_f2.y"], 0);
    assert!(r
        .stdout
        .contains("canonical = 0; 0,1,0\ntransporter = 1,1,0,1\nfactors = 1,0,1\n"));
    let h = run(&["canon", "headerless.y", "--field", "2"]);
    assert_eq!(h.code, 0);
    assert_eq!(h.stdout, r.stdout);
}

#[test]
fn iso_verdicts() {
    golden("iso_self", &["iso", "q_alpha0.rep", "q_alpha0.rep"], 0);
    golden("iso_conjugate", &["iso", "q_alpha0.rep", "q_alpha0_conj.rep"], 0);
    golden("iso_alpha_shift", &["iso", "q_alpha0.rep", "q_alpha1.rep"], 1);
    let r = run(&["iso", "zero5.rep", "rank1_5.rep", "--seed", "7"]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(r.stdout.contains("seed = 7\nintertwiner_dim = 20\n"));
    assert!(r.stderr.contains("InconclusiveSearch"));
}

#[test]
fn classify_char_two() {
    let dir = tempdir();
    let rep = dir.join("m4.rep");
    assert_eq!(run(&["build", "char2_m4.spec", "--out", rep.to_str().unwrap()]).code, 0);
    let r = golden("classify_char2_m4", &["classify", rep.to_str().unwrap()], 0);
    assert!(r.stdout.contains("canonical_y = 0; 0,1,0\n"));
}

#[test]
fn enumerate_tables() {
    let r = golden(
        "enumerate_f2_m3",
        &["enumerate", "--field", "2", "--m", "3", "--weights", "1:1"],
        0,
    );
    assert!(r
        .stdout
        .contains("specs = 4\nbuckets = 4\ndistinct_invariants = 4\nconsistent = true\n"));
    let r = golden("enumerate_f3_m2", &["enumerate", "--field", "3", "--m", "2"], 0);
    assert!(r
        .stdout
        .contains("specs = 3\nbuckets = 3\ndistinct_invariants = 3\nconsistent = true\n"));
    let r = run(&["enumerate", "--field", "3", "--m", "2", "--weights", "0:1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("MissingWeightOne"));
    let r = run(&[
        "enumerate",
        "--field",
        "2",
        "--m",
        "4",
        "--weights",
        "1:2",
        "--limit",
        "8",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("BudgetExceeded"));
}

#[test]
fn deterministic_output() {
    let args = ["enumerate", "--field", "2", "--m", "4", "--weights", "1:1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn tempdir() -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "uniserial-cli-{}-{}",
        std::process::id(),
        N.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}
