use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_duality-lab"));
    c.env_remove("DUALITY_LAB_MAX_ENUM");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("one JSON object on stdout")
}

fn shipped() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/buffer_n3.dl")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const SMALL: &str = "\
frame F { worlds a b ; trans a -> b ; pred p = { b } ; }
frame G { worlds x ; }
rel S : F -> G { a -> x, b -> x }
rel T : F -> F { a -> a }
";

#[test]
fn generated_buffer_is_a_bisimulation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.dl");
    let o = run(&[
        "fixture",
        "buffer",
        "--n",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["check-bisim", out.to_str().unwrap(), "--rel", "Q"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("bisimulation: true"));
}

#[test]
fn shipped_fixture_matches_the_generator() {
    let o = run(&["fixture", "buffer", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), std::fs::read_to_string(shipped()).unwrap());
    assert_eq!(code(&run(&["parse", shipped().to_str().unwrap()])), 0);
}

#[test]
fn main_derivation_is_accepted() {
    let f = shipped();
    let o = run(&[
        "check-derivation",
        f.to_str().unwrap(),
        "--derivation",
        "main",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("main: accepted\n"));

    let o = run(&[
        "--json",
        "check-derivation",
        f.to_str().unwrap(),
        "--derivation",
        "main",
        "--assume",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["report"]["conditional"], true);
    assert_eq!(v["report"]["facts_checked"], 0);
}

#[test]
fn tampered_derivation_is_rejected_with_exit_1() {
    let text = std::fs::read_to_string(shipped()).unwrap();
    // Point one fact premise at the wrong judgment.
    let bad = text.replacen("fact L_sim_0 ;", "fact R_sim_1 ;", 1);
    assert_ne!(bad, text);
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "bad.dl", &bad);
    let o = run(&["--json", "check-derivation", &p, "--derivation", "main_0"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "fail");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn json_report_has_the_fixed_keys() {
    let o = run(&[
        "--json",
        "check-bisim",
        shipped().to_str().unwrap(),
        "--rel",
        "Q",
    ]);
    let v = json(&o);
    for key in ["command", "verdict", "witnesses", "timings", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "check-bisim");
}

#[test]
fn verify_duality_is_deterministic() {
    let args = [
        "--json",
        "verify-duality",
        "--suite",
        "tarski",
        "--max-size",
        "3",
        "--seed",
        "7",
        "--samples",
        "50",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let (mut a, mut b) = (json(&a), json(&b));
    a["timings"] = Value::Null;
    b["timings"] = Value::Null;
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a["seed"], 7);

    let o = run(&[
        "verify-duality",
        "--suite",
        "thomason",
        "--max-size",
        "2",
        "--seed",
        "3",
        "--samples",
        "30",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn failing_simulation_exits_1_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "s.dl", SMALL);
    // a -> b in F, but x has no successor.
    let o = run(&["check-sim", &p, "--rel", "S"]);
    assert_eq!(code(&o), 1);
    assert!(
        stdout(&o).contains("witness: (a, x) fails forth on a -> b"),
        "{}",
        stdout(&o)
    );
    let o = run(&["greatest-bisim", &p, "--left", "F", "--right", "G"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(b,x)"));
    assert!(!stdout(&o).contains("(a,x)"));
}

#[test]
fn eval_prints_sorted_worlds() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "s.dl", SMALL);
    let o = run(&["eval", &p, "--formula", "dia @a | @a", "--frame", "F"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "a b\n");
    let o = run(&["eval", &p, "--formula", "box bot", "--frame", "F"]);
    assert_eq!(stdout(&o), "b\n");
}

#[test]
fn lift_respects_the_enumeration_bound() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "s.dl", SMALL);
    let o = run(&["lift", &p, "--rel", "T"]);
    assert_eq!(code(&o), 0);
    // {} lifts to everything (4), {a} to {a} and {a,b} (2).
    assert!(
        stdout(&o).starts_with("lower lifting of T: 6 pairs\n"),
        "{}",
        stdout(&o)
    );
    let o = run(&["lift", &p, "--rel", "T", "--upper"]);
    // T ⊆ R(S): T ∈ {∅, {a}} for S ∋ a, T = ∅ otherwise.
    assert!(
        stdout(&o).starts_with("upper lifting of T: 6 pairs\n"),
        "{}",
        stdout(&o)
    );

    let o = bin()
        .args(["lift", &p, "--rel", "T"])
        .env("DUALITY_LAB_MAX_ENUM", "8")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the bound of 8"));
}

#[test]
fn check_rel_reports_atomic_foundedness_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = "\
caba P1 { elems e one ; leq e <= one ; }
caba P2 { elems z a c top ; leq z <= a, z <= c, a <= top, c <= top ; }
rel R : P1 -> P2 { e -> top, one -> top }
";
    let p = write(&dir, "c.dl", text);
    let o = run(&["check-rel", &p, "--rel", "R"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("bimodule: pass"), "{}", stdout(&o));
    assert!(
        stdout(&o).contains("atomic-founded: fail"),
        "{}",
        stdout(&o)
    );

    let small = write(&dir, "s.dl", SMALL);
    let o = run(&["check-rel", &small, "--rel", "S"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "e.dl",
        "frame A { worlds y ; }\nframe B { worlds y ; }\nrel Q : A -> B { x -> y }\n",
    );
    let o = run(&["parse", &p]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("3:18"), "{err}");
    assert!(err.contains("unknown world"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify-duality", "--suite", "nope"])), 2);
    assert_eq!(
        code(&run(&[
            "verify-duality",
            "--suite",
            "tarski",
            "--max-size",
            "0"
        ])),
        2
    );
    assert_eq!(code(&run(&["bogus"])), 2);
    assert_eq!(
        code(&run(&["check-sim", "/nonexistent/file.dl", "--rel", "Q"])),
        2
    );
    let f = shipped();
    assert_eq!(
        code(&run(&["check-sim", f.to_str().unwrap(), "--rel", "nope"])),
        2
    );
    assert_eq!(
        code(&run(&["eval", f.to_str().unwrap(), "--formula", "dia"])),
        2
    );
}
