use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qcone::quotient::{verify_witness, QuotientOptions, QuotientSpace};
use qcone::{ConeSpace, Matrix, PLQuasiNorm, QVec};
use tempfile::TempDir;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn put(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    /// `R^2` with `u(x) + u(y)` and the diagonal as subcone.
    fn diagonal_setup(&self) -> (PathBuf, PathBuf, PathBuf) {
        (
            self.put("x.json", r#"{"dim": 2, "kind": "full"}"#),
            self.put("p.json", r#"{"wplus": [1, 1], "wminus": [0, 0]}"#),
            self.put("y.json", r#"{"dim": 2, "kind": "polyhedral", "A": [[1, -1], [-1, 1]]}"#),
        )
    }
}

fn qcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcone")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn dist_prints_exact_values() {
    let f = Files::new();
    let (x, p, _) = f.diagonal_setup();
    let out = qcone(&["dist", "--space", s(&x), "--norm", s(&p), "--from", "2,3", "--to", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0\n");
    let out = qcone(&["dist", "--space", s(&x), "--norm", s(&p), "--from", "1,1", "--to", "5/2,3"]);
    assert_eq!(stdout(&out), "7/2\n");
    let out = qcone(&[
        "dist", "--space", s(&x), "--norm", s(&p), "--from", "2,3", "--to", "1,1", "--symmetric",
    ]);
    assert_eq!(stdout(&out), "3\n");
    let orthant = f.put("o.json", r#"{"dim": 2, "kind": "orthant"}"#);
    let out = qcone(&["dist", "--space", s(&orthant), "--norm", s(&p), "--from", "1,1", "--to", "0,0"]);
    assert_eq!(stdout(&out), "inf\n");
}

#[test]
fn build_reports_a_valid_witness() {
    let f = Files::new();
    let (x, p, y) = f.diagonal_setup();
    let out = qcone(&["quotient", "--space", s(&x), "--norm", s(&p), "--subcone", s(&y), "build"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().next().unwrap();
    let w = line.strip_prefix("FALSIFIED witness=").expect(line);
    let w = QVec::parse_csv(w.trim_matches(['(', ')'])).unwrap();
    let qs = QuotientSpace::build_with(
        ConeSpace::full(2),
        PLQuasiNorm::upper_sum(2),
        ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, -1], &[-1, 1]])),
        QuotientOptions {
            allow_prenorm: true,
        },
    )
    .unwrap();
    assert!(verify_witness(&qs, &w).unwrap());
}

#[test]
fn prenorm_needs_the_flag() {
    let f = Files::new();
    let (x, p, y) = f.diagonal_setup();
    let base = ["quotient", "--space", s(&x), "--norm", s(&p), "--subcone", s(&y)];
    let out = qcone(&[&base[..], &["hatp", "--x", "2,-3"]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not closed"), "{}", stderr(&out));
    let out = qcone(&[&base[..], &["--allow-prenorm", "hatp", "--x", "2,-3"]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0\n");
    let out = qcone(&[&base[..], &["--allow-prenorm", "qdist", "--x", "0,0", "--y", "-2,3"]].concat());
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn closed_quotient_classes() {
    let f = Files::new();
    let x = f.put("x.json", r#"{"dim": 2, "kind": "full"}"#);
    let p = f.put("p.json", r#"{"wplus": [1, 1], "wminus": [1, 1]}"#);
    let y = f.put("y.json", r#"{"dim": 2, "kind": "polyhedral", "A": [[0, 1], [0, -1]]}"#);
    let base = ["quotient", "--space", s(&x), "--norm", s(&p), "--subcone", s(&y)];
    let out = qcone(&[&base[..], &["build"]].concat());
    assert!(stdout(&out).starts_with("CERTIFIED_CLOSED\n"), "{}", stdout(&out));
    let out = qcone(&[&base[..], &["class", "--x", "2,3"]].concat());
    assert_eq!(stdout(&out), "rep=(0,3)\ncoords=(3)\n");
    let out = qcone(&[&base[..], &["hatp", "--x", "5,-1/2"]].concat());
    assert_eq!(stdout(&out), "1/2\n");
    let out = qcone(&["polar", "--space", s(&x), "--norm", s(&p), "--subcone", s(&y)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("functional=(0,1) norm=1"), "{}", stdout(&out));
}

const PROJECTION: &str = r#"{
    "matrix": [[0, 1]],
    "source": {"space": {"dim": 2, "kind": "polyhedral", "A": [[0, 1]]},
               "norm": {"wplus": [0, 1], "wminus": [0, 0]}},
    "target": {"space": {"dim": 1, "kind": "orthant"},
               "norm": {"wplus": [1], "wminus": [0]}}
}"#;

#[test]
fn analyze_and_factorize() {
    let f = Files::new();
    let map = f.put("f.json", PROJECTION);
    let out = qcone(&["analyze", "--map", s(&map)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("continuous=true\nnorm=1\n"), "{text}");
    assert!(text.contains("openness=1\n"), "{text}");
    assert!(text.contains("factorization norm_t=1 norm_tilde=1"), "{text}");
    assert_eq!(stdout(&qcone(&["opnorm", "--map", s(&map)])), text);

    let out = qcone(&["factorize", "--map", s(&map)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("norm_t=1\nnorm_tilde=1\n"), "{text}");
    assert!(text.contains("induced_matrix:\n  (1)\n"), "{text}");
}

#[test]
fn factorize_refuses_a_non_closed_kernel() {
    let f = Files::new();
    let map = f.put(
        "f.json",
        r#"{
            "matrix": [[0, 1]],
            "source": {"space": {"dim": 2, "kind": "full"},
                       "norm": {"wplus": [1, 1], "wminus": [0, 0]}},
            "target": {"space": {"dim": 1, "kind": "full"},
                       "norm": {"wplus": [1], "wminus": [0]}}
        }"#,
    );
    let out = qcone(&["factorize", "--map", s(&map)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not closed"), "{}", stderr(&out));
}

#[test]
fn complexity_compare_report() {
    let f = Files::new();
    let a = f.put("a.csv", "index,cost\n0,4\n1,2\n2,2\n");
    let b = f.put("b.csv", "index,cost\n0,3\n1,2\n2,1\n");
    let out = qcone(&["complexity", "compare", "--a", s(&a), "--b", s(&b), "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with("d(a,b) = 0\nd(b,a) = 5/4\ne(a,b) = inf\ne(b,a) = 5/4\nverdict = b improves on a\n"),
        "{text}"
    );
    let bad = f.put("bad.csv", "n,cost\n0,1\n");
    let out = qcone(&["complexity", "compare", "--a", s(&bad), "--b", s(&b)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("index,cost"));
}

#[test]
fn validation_errors_exit_with_two() {
    let f = Files::new();
    let (x, p, _) = f.diagonal_setup();
    let out = qcone(&["dist", "--space", s(&x), "--norm", s(&p), "--from", "1,2,3", "--to", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dimension"), "{}", stderr(&out));
    let neg = f.put("n.json", r#"{"wplus": [-1, 1], "wminus": [0, 0]}"#);
    let out = qcone(&["dist", "--space", s(&x), "--norm", s(&neg), "--from", "0,0", "--to", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcone(&["dist", "--space", "/nonexistent.json", "--norm", s(&p), "--from", "0,0", "--to", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn check_runs_one_property() {
    let out = qcone(&["check", "--seed", "1", "--cases", "5", "--property", "hat_p_sublinear"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS hat_p_sublinear"));
    let out = qcone(&["check", "--property", "no_such_property"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_full_suite_passes() {
    let out = qcone(&["check", "--seed", "1", "--cases", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}
