use std::path::Path;
use std::process::{Command, Output};

use etafrob::complex::standard_exact_pair;
use etafrob::frobenius::env_inflation;
use etafrob::gen::random_complex;
use etafrob::io::InstanceFile;
use etafrob::{ChainMap, CoeffRing, Complex, RingMatrix, ScalarEta};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etafrob")).args(args).current_dir(dir).env_remove("ETAFROB_RING").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn envelope_is_recognized() {
    let dir = tempfile::tempdir().unwrap();
    let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
    let x = random_complex(&c, &mut ChaCha8Rng::seed_from_u64(1), 3, 2).unwrap();
    let env = env_inflation(&c, &x).unwrap();
    let path = dir.path().join("env.json");
    std::fs::write(&path, InstanceFile::exact_pair(&c, &env.pair.i, &env.pair.p).unwrap().to_json().unwrap()).unwrap();
    let o = run(&["check", "env.json", "--op", "is-eta-conflation"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = &records(&o)[0];
    assert_eq!(r["verdict"], "pass");
    assert!(r["witness"]["alpha"].is_object());
}

/// With `η = 0` a pair whose invariant is not null-homotopic is no conflation.
#[test]
fn nonsplit_pair_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let ring = CoeffRing::IntegersMod(4);
    let c = ScalarEta::new(ring, 0);
    let x = Complex::stalk(&c, 2, 1);
    let z = Complex::stalk(&c, 1, 1);
    let h = ChainMap::new(&c, z.shift(&c, -1), x, [(2, RingMatrix::from_i64(ring, 1, 1, &[1]))]).unwrap();
    let pair = standard_exact_pair(&c, &h).unwrap();
    std::fs::write(
        dir.path().join("p.json"),
        InstanceFile::exact_pair(&c, &pair.i, &pair.p).unwrap().to_json().unwrap(),
    )
    .unwrap();
    let o = run(&["check", "p.json", "--op", "is-eta-conflation"], dir.path());
    assert_eq!(code(&o), 1);
    assert_eq!(records(&o)[0]["verdict"], "none");
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(code(&run(&["check", "bad.json", "--op", "phi"], dir.path())), 2);
    assert_eq!(code(&run(&["check", "missing.json", "--op", "phi"], dir.path())), 2);
    assert_eq!(code(&run(&["gen", "--seed", "1", "--profile", "scalar-eta", "-o", "a.json"], dir.path())), 0);
    assert_eq!(code(&run(&["check", "a.json", "--op", "no-such-op"], dir.path())), 2);
    assert_eq!(code(&run(&["check", "a.json", "--op", "theta-extend"], dir.path())), 2);
    assert_eq!(code(&run(&["gen", "--seed", "1", "--profile", "nonsense"], dir.path())), 2);
}

#[test]
fn generation_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    for (i, profile) in
        ["scalar-eta(Z/4,2,4,3)", "graded(Z,3,2)", "gsystem(F5,3,2,3,ga)", "delta(Z/9,3,2,3)"].iter().enumerate()
    {
        let (a, b) = (format!("a{i}.json"), format!("b{i}.json"));
        assert_eq!(code(&run(&["gen", "--seed", "42", "--profile", profile, "-o", &a], p)), 0);
        assert_eq!(code(&run(&["gen", "--seed", "42", "--profile", profile, "-o", &b], p)), 0);
        assert_eq!(std::fs::read(p.join(&a)).unwrap(), std::fs::read(p.join(&b)).unwrap());
    }
    let file = InstanceFile::parse(&std::fs::read_to_string(p.join("a0.json")).unwrap()).unwrap();
    let c = file.scalar_category().unwrap().unwrap();
    assert_eq!(c, ScalarEta::new(CoeffRing::IntegersMod(4), 2));
    let x: Complex<ScalarEta> = file.decode().unwrap();
    assert!(x.validate(&c));
    assert_eq!(code(&run(&["check", "a0.json", "--op", "axioms"], p)), 0);
    assert_eq!(code(&run(&["check", "a1.json", "--op", "totalize"], p)), 0);
    assert_eq!(code(&run(&["check", "a2.json", "--op", "totalize"], p)), 0);
    assert_eq!(code(&run(&["check", "a3.json", "--op", "theta-extend"], p)), 0);
    assert_eq!(code(&run(&["check", "a3.json", "--op", "phi"], p)), 0);
}

#[test]
fn zero_length_gives_the_empty_complex() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "--seed", "3", "--profile", "scalar-eta(Z/4,2,0,3)"], dir.path());
    assert_eq!(code(&o), 0);
    let file = InstanceFile::parse(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(file.decode::<Complex<ScalarEta>>().unwrap().is_zero());
}

#[test]
fn ring_defaults_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_etafrob"))
        .args(["gen", "--seed", "3", "--profile", "scalar-eta"])
        .env("ETAFROB_RING", "F5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(InstanceFile::parse(&String::from_utf8(o.stdout).unwrap()).unwrap().ring, CoeffRing::PrimeField(5));
    drop(dir);
}

#[test]
fn suite_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["suite", "--seed", "9", "--trials", "1", "--ring", "F5"];
    let (a, b) = (run(&args, dir.path()), run(&args, dir.path()));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let strip = |o: &Output| {
        records(o)
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall-ms");
                r
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(strip(&a).iter().all(|r| r["verdict"] == "pass" && r["instance-seed"].is_u64()));
}

#[test]
fn cone_sign_fault_fails_the_suite_with_replay_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "suite",
            "--seed",
            "5",
            "--trials",
            "4",
            "--mutant",
            "cone-neg-block",
            "--only",
            "ex1,ex1-op,zero-eta-is-split",
            "--out-dir",
            "fails",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    let failing: Vec<_> = records(&o).into_iter().filter(|r| r["verdict"] == "fail").collect();
    assert!(!failing.is_empty());
    for r in &failing {
        let path = dir.path().join(r["replay"].as_str().unwrap());
        assert!(InstanceFile::parse(&std::fs::read_to_string(path).unwrap()).is_ok());
    }
}
