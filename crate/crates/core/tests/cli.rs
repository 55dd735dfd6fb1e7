mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use commham::io::{load_model, save_certificate, save_model};
use commham::lattice::{PlaquetteId, VertexId};
use commham::linalg::pauli_word;
use commham::model::gen_toric;
use commham::verifier::Certificate;
use tempfile::TempDir;

use common::{frustrated_torus, open};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commham")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_torus(dir: &TempDir) -> PathBuf {
    let m = path(dir, "torus.json");
    let out = run(&["gen", "--model", "toric", "--lx", "4", "--ly", "4", "--boundary", "periodic", "-o", s(&m)]);
    assert_eq!(code(&out), 0);
    m
}

#[test]
fn gen_writes_sixteen_terms() {
    let dir = TempDir::new().unwrap();
    let model = load_model(gen_torus(&dir)).unwrap();
    assert_eq!(model.terms().count(), 16);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (path(&dir, "a.json"), path(&dir, "b.json"), path(&dir, "c.json"));
    for (file, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let out = run(&[
            "gen", "--model", "random", "--method", "signed-toric", "--seed", seed, "--lx", "4", "--ly", "4",
            "--boundary", "periodic", "-o", s(file),
        ]);
        assert_eq!(code(&out), 0);
    }
    let read = |p: &PathBuf| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn gen_rejects_bad_lattices_and_flags() {
    assert_eq!(code(&run(&["gen", "--model", "toric", "--lx", "3", "--ly", "3", "--boundary", "periodic"])), 2);
    assert_eq!(code(&run(&["gen", "--model", "nonsense", "--lx", "3", "--ly", "3"])), 2);
}

#[test]
fn check_reports_commutation() {
    let dir = TempDir::new().unwrap();
    let m = gen_torus(&dir);
    let out = run(&["check", s(&m)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("commuting: yes"));
    assert!(stdout(&out).contains("p(0,0): 8"));

    let bad = path(&dir, "bad.json");
    let model = gen_toric(open(3, 3)).with_term(PlaquetteId::new(1, 0), pauli_word("IIIX")).unwrap();
    save_model(&model, &bad).unwrap();
    let out = run(&["check", s(&bad)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("non-commuting: p(0,0) p(1,0)"), "{}", stdout(&out));

    let truncated = path(&dir, "trunc.json");
    let text = std::fs::read_to_string(&m).unwrap();
    std::fs::write(&truncated, &text[..text.len() / 3]).unwrap();
    assert_eq!(code(&run(&["check", s(&truncated)])), 2);
    assert_eq!(code(&run(&["check", s(&path(&dir, "missing.json"))])), 2);
}

#[test]
fn verify_toric_certificate() {
    let dir = TempDir::new().unwrap();
    let m = gen_torus(&dir);
    let c = path(&dir, "c.json");
    let mut cert = Certificate::default();
    for x in 0..4 {
        for y in 0..4 {
            cert.alpha.insert(VertexId::new(x, y), 0);
            cert.beta.insert(VertexId::new(x, y), 0);
        }
    }
    save_certificate(&cert, &c).unwrap();
    let out = run(&["verify", s(&m), s(&c)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("ACCEPT"));
    let log2: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("log2 omega = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((log2 + 16.0).abs() < 1e-10);
    // a threshold above 2^-16 rejects
    assert_eq!(code(&run(&["verify", s(&m), s(&c), "--log2-threshold", "-15"])), 1);
    assert_eq!(code(&run(&["verify", s(&m), s(&c), "--threshold", "1e-5"])), 0);

    cert.alpha.insert(VertexId::new(9, 9), 0);
    save_certificate(&cert, &c).unwrap();
    assert_eq!(code(&run(&["verify", s(&m), s(&c)])), 2);
}

#[test]
fn verify_frustrated_rejects() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "f.json");
    save_model(&frustrated_torus(), &m).unwrap();
    let c = path(&dir, "c.json");
    let mut cert = Certificate::default();
    for x in 0..4 {
        for y in 0..4 {
            cert.alpha.insert(VertexId::new(x, y), ((x + y) % 2) as u8);
            cert.beta.insert(VertexId::new(x, y), 0);
        }
    }
    save_certificate(&cert, &c).unwrap();
    let out = run(&["verify", s(&m), s(&c)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("REJECT"));
}

#[test]
fn prove_then_verify() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.json");
    assert_eq!(code(&run(&["gen", "--model", "toric", "--lx", "3", "--ly", "3", "-o", s(&m)])), 0);
    for mode in ["--exhaustive", "--greedy"] {
        let c = path(&dir, "c.json");
        assert_eq!(code(&run(&["prove", s(&m), mode, "-o", s(&c)])), 0);
        assert_eq!(code(&run(&["verify", s(&m), s(&c)])), 0);
    }
    assert_eq!(code(&run(&["prove", s(&m)])), 2);
}

#[test]
fn prove_failure_modes() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "f.json");
    save_model(&frustrated_torus(), &f).unwrap();
    assert_eq!(code(&run(&["prove", s(&f), "--greedy", "--restarts", "2"])), 1);
    let out = run(&["prove", s(&f), "--exhaustive"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    assert_eq!(code(&run(&["prove", s(&f), "--exhaustive", "--cap", "32"])), 1);
}

#[test]
fn oracle_reports_overlap_and_sum() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.json");
    assert_eq!(code(&run(&["gen", "--model", "toric", "--lx", "3", "--ly", "3", "-o", s(&m)])), 0);
    let out = run(&["oracle", s(&m), "--sum-check"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("integrality: pass"));
    assert!(text.contains("sum identity: pass"));

    let big = path(&dir, "big.json");
    assert_eq!(code(&run(&["gen", "--model", "toric", "--lx", "6", "--ly", "4", "-o", s(&big)])), 0);
    assert_eq!(code(&run(&["oracle", s(&big)])), 2);
}

#[test]
fn files_round_trip_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.json");
    let out = run(&[
        "gen", "--model", "random", "--method", "rotated-classical", "--seed", "9", "--lx", "3", "--ly", "3", "-o", s(&m),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&m).unwrap();
    let again = path(&dir, "again.json");
    save_model(&load_model(&m).unwrap(), &again).unwrap();
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());
}
