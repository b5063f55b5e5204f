use std::path::PathBuf;
use std::process::Command;

use lexcut::solver::{algorithm1_solve, algorithm2_solve, SolveOptions};
use lexcut_cli::instance::load_instance;
use lexcut_cli::trace::TraceFile;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name)
}

fn lexcut(args: &[&str]) -> (String, String, i32) {
    lexcut_env(args, &[])
}

fn lexcut_env(args: &[&str], env: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lexcut"));
    cmd.args(args).env_remove("LEXCUT_ITER_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn path(name: &str) -> String {
    instance(name).to_string_lossy().into_owned()
}

#[test]
fn solve_reports_and_exit_codes() {
    let (out, _, code) = lexcut(&["solve", &path("triangle2.json"), "--algorithm", "cut"]);
    assert_eq!(out.trim(), "OPTIMAL (1,0) value 1; cuts: 1");
    assert_eq!(code, 0);
    let (out, _, code) = lexcut(&["solve", &path("ball3.json"), "--algorithm", "cut"]);
    assert_eq!(out.trim(), "INFEASIBLE; cuts: 7");
    assert_eq!(code, 2);
    let (_, err, code) = lexcut(&["solve", &path("bad_basis.json")]);
    assert!(err.contains("basis not unimodular"), "{err}");
    assert_eq!(code, 1);
    let (out, _, code) = lexcut(&["solve", &path("cloud_half.json"), "--algorithm", "enum"]);
    assert_eq!(out.trim(), "OPTIMAL (1,1) value 1; iterations: 2");
    assert_eq!(code, 0);
}

#[test]
fn exit_codes_are_deterministic() {
    for name in [
        "triangle2.json",
        "ball2.json",
        "bad_basis.json",
        "cloud_integer.json",
    ] {
        let a = lexcut(&["solve", &path(name)]);
        let b = lexcut(&["solve", &path(name)]);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn usage_errors_are_not_mistaken_for_infeasibility() {
    assert_eq!(lexcut(&["solve"]).2, 1);
    assert_eq!(lexcut(&["frobnicate"]).2, 1);
    let t = std::env::temp_dir().join("unused-trace.json");
    assert_eq!(
        lexcut(&[
            "solve",
            &path("triangle2.json"),
            "--trace",
            t.to_str().unwrap(),
            "--no-trace"
        ])
        .2,
        1
    );
    assert_eq!(lexcut(&["--help"]).2, 0);
}

#[test]
fn iteration_limit_from_environment() {
    let (_, err, code) = lexcut_env(
        &["solve", &path("ball3.json")],
        &[("LEXCUT_ITER_LIMIT", "3")],
    );
    assert_eq!(code, 1);
    assert!(err.contains("iteration limit 3"), "{err}");
    let (out, _, code) = lexcut_env(
        &["solve", &path("ball3.json")],
        &[("LEXCUT_ITER_LIMIT", "100")],
    );
    assert_eq!((out.trim(), code), ("INFEASIBLE; cuts: 7", 2));
}

#[test]
fn cuts_examples() {
    let (out, _, code) = lexcut(&["cuts", "--xbar", "1,2,1", "--basis", "identity", "--all"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(
        lines,
        [
            "x1 >= 1",
            "2 x1 + 1 x2 >= 4",
            "3 x1 + 1 x2 + 1 x3 >= 6",
            "x1 >= 0",
            "x2 >= 0",
            "x3 >= 0"
        ]
    );
    assert_eq!(
        lexcut(&["cuts", "--xbar", "0,5", "--k", "1"]).0.trim(),
        "x1 >= 0"
    );
    assert_eq!(
        lexcut(&["cuts", "--xbar", "1,2,1", "--k", "3"]).0.trim(),
        "3 x1 + 1 x2 + 1 x3 >= 6"
    );
    let (out, _, _) = lexcut(&["cuts", "--xbar", "1,1", "--basis", "1,1;0,1", "--k", "2"]);
    assert_eq!(out.trim(), "1 x1 + 2 x2 >= 3");
    assert_eq!(lexcut(&["cuts", "--xbar", "1,-1", "--k", "1"]).2, 1);
}

#[test]
fn hull_check_examples() {
    let (out, _, code) = lexcut(&[
        "hull-check",
        "--xbar",
        "1,2,1",
        "--basis",
        "identity",
        "--box",
        "6",
    ]);
    assert!(out.starts_with("PASS: 343 points"), "{out}");
    assert_eq!(code, 0);
    let (out, _, code) = lexcut(&["hull-check", "--xbar", "0,0", "--box", "4"]);
    assert!(out.starts_with("PASS"), "{out}");
    assert_eq!(code, 0);
    let (out, _, code) = lexcut(&[
        "hull-check",
        "--xbar",
        "1,2,1",
        "--box",
        "6",
        "--perturb-rhs",
        "1/2",
    ]);
    assert!(out.starts_with("FAIL"), "{out}");
    assert_eq!(code, 1);
    let (out, _, _) = lexcut(&[
        "hull-check",
        "--xbar",
        "2,1",
        "--basis",
        "1,1;0,1",
        "--box",
        "8",
    ]);
    assert!(out.starts_with("PASS"), "{out}");
}

#[test]
fn split_check_examples() {
    let t1 = path("triangle1.json");
    let t2 = path("triangle2.json");
    assert_eq!(
        lexcut(&[
            "split-check",
            &t1,
            "--cut",
            "x2>=0",
            "--pi",
            "1,0",
            "--pi0",
            "0"
        ])
        .0
        .trim(),
        "VALID"
    );
    assert_eq!(
        lexcut(&["split-check", &t2, "--cut", "2x1+x2>=2", "--enumerate", "1"])
            .0
            .trim(),
        "no validating split with |pi|_inf <= 1"
    );
    assert_eq!(
        lexcut(&[
            "split-check",
            &t1,
            "--cut",
            "0>=-1",
            "--pi",
            "1,0",
            "--pi0",
            "0"
        ])
        .0
        .trim(),
        "VALID"
    );
    assert_eq!(
        lexcut(&[
            "split-check",
            &t2,
            "--cut",
            "2x1+x2>=2",
            "--pi",
            "1,0",
            "--pi0",
            "0"
        ])
        .0
        .trim(),
        "INVALID"
    );
    let (out, _, _) = lexcut(&["split-check", &t1, "--cut", "x2>=0", "--enumerate", "1"]);
    assert!(out.lines().any(|l| l == "pi = (1,0) pi0 = 0"), "{out}");
}

#[test]
fn compare_examples() {
    let (out, _, _) = lexcut(&["compare", &path("ball3.json")]);
    let lines: Vec<_> = out.lines().collect();
    assert!(lines[0].starts_with("alg1: 7 cuts;"), "{out}");
    assert!(lines[1].starts_with("alg2: 11 line-2 executions;"), "{out}");
    let (out, _, _) = lexcut(&["compare", &path("cloud_integer.json")]);
    assert!(out.starts_with("alg1: 0 cuts;"), "{out}");
    let alg2 = out.lines().nth(1).unwrap();
    assert!(
        alg2.starts_with("alg2: 1 line-2") || alg2.starts_with("alg2: 2 line-2"),
        "{out}"
    );
    assert!(out.contains("|S_up| = 3"), "{out}");
    let (out, _, _) = lexcut(&["compare", &path("triangle2.json")]);
    assert!(out.starts_with("alg1: 1 cuts;"), "{out}");
}

#[test]
fn traces_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for (name, alg) in [
        ("triangle1.json", "cut"),
        ("triangle2.json", "cut"),
        ("triangle2.json", "enum"),
        ("cloud_half.json", "cut"),
        ("cloud_half.json", "enum"),
    ] {
        let file = dir.path().join(format!("{name}.{alg}.json"));
        let (_, err, code) = lexcut(&[
            "solve",
            &path(name),
            "--algorithm",
            alg,
            "--trace",
            file.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        let text = std::fs::read_to_string(&file).unwrap();
        let tf = TraceFile::from_json(&text).unwrap();
        assert_eq!(tf.to_json(), text, "{name} {alg}: re-serialization differs");

        let inst = load_instance(&instance(name)).unwrap();
        let opts = SolveOptions::default();
        let direct = match alg {
            "cut" => algorithm1_solve(&inst.set, &inst.objective, inst.basis.as_ref(), &opts),
            _ => algorithm2_solve(&inst.set, &inst.objective, inst.basis.as_ref(), &opts),
        }
        .unwrap();
        assert_eq!(tf.trace().unwrap(), direct.trace, "{name} {alg}");
        assert_eq!(tf.outcome(), direct.outcome);
    }
}

#[test]
fn numeric_traces_use_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ball.json");
    let (_, _, code) = lexcut(&[
        "solve",
        &path("ball2.json"),
        "--trace",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    let tf = TraceFile::from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert!(tf.numeric);
    let text = tf.to_json();
    assert!(text.contains("\"xbar\""));
    assert!(text.contains('.'), "decimal strings expected");
    assert_eq!(tf.stats.cuts, 3);
}
