use std::path::Path;

use chainrank::cli::{run, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["chainrank"];
    argv.extend_from_slice(args);
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

const IDEAL: &str = "chainrank v1 3 4\n1000\n1100\n1111\nstudents: 2 1 3\nquestions: 1 2 3 4\n";

#[test]
fn gen_then_solve_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sol = dir.path().join("sol.txt");
    let (code, _, err) = call(&[
        "gen", "--students", "8", "--questions", "6", "--flip-prob", "0.2", "--k-perturb", "1", "--seed", "3",
        "--output", arg(&inst),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    for variant in ["constrained", "both"] {
        let (code, _, err) = call(&[
            "solve", "--variant", variant, "--mode", "editing", "--k", "1", "--input", arg(&inst), "--output", arg(&sol),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        let (code, out, err) = call(&["check", "--input", arg(&inst), "--solution", arg(&sol)]);
        assert_eq!(code, EXIT_OK, "{out}{err}");
    }
    let (code, _, err) = call(&[
        "oracle", "--variant", "constrained", "--mode", "addition", "--k", "1", "--input", arg(&inst), "--output",
        arg(&sol),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(call(&["check", "--input", arg(&inst), "--solution", arg(&sol)]).0, EXIT_OK);
}

#[test]
fn ideal_input_costs_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    std::fs::write(&inst, IDEAL).unwrap();
    let (code, out, err) = call(&["solve", "--variant", "constrained", "--mode", "addition", "--k", "1", "--input", arg(&inst)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("cost: 0\n"), "{out}");
    let (code, out, _) = call(&["recognize", "--input", arg(&inst)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("ideal\nstudent_order: 1 2 3\n"), "{out}");
}

#[test]
fn tampered_cost_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sol = dir.path().join("sol.txt");
    std::fs::write(&inst, "chainrank v1 2 2\n10\n01\nstudents: 1 2\nquestions: 1 2\n").unwrap();
    let (code, _, err) = call(&[
        "solve", "--variant", "both", "--mode", "editing", "--k", "1", "--input", arg(&inst), "--output", arg(&sol),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&sol).unwrap();
    assert!(text.starts_with("cost: 1\n"), "{text}");
    std::fs::write(&sol, text.replacen("cost: 1", "cost: 0", 1)).unwrap();
    let (code, out, err) = call(&["check", "--input", arg(&inst), "--solution", arg(&sol)]);
    assert_eq!(code, EXIT_INFEASIBLE, "{out}{err}");
}

#[test]
fn reduce_writes_solvable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let inst = dir.path().join("red.txt");
    std::fs::write(&cnf, "p cnf 1 1\n1 0\n").unwrap();
    let (code, _, err) = call(&["reduce", "--cnf", arg(&cnf), "--output", arg(&inst)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, err) = call(&["oracle", "--variant", "unconstrained", "--mode", "editing", "--k", "1", "--input", arg(&inst)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&inst).unwrap();
    let t_phi = text
        .lines()
        .find_map(|l| l.split("t_phi").nth(1))
        .map(|r| r.trim_start_matches([' ', ':', '=']).split_whitespace().next().unwrap().to_owned())
        .expect("t_phi comment");
    assert!(out.starts_with(&format!("cost: {t_phi}\n")), "{out}");
}

#[test]
fn bad_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    std::fs::write(&inst, "chainrank v1 1 1\n2\n").unwrap();
    let (code, _, err) = call(&["recognize", "--input", arg(&inst)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(call(&["bench", "--variant", "constrained", "--sweep", "x"]).0, EXIT_USAGE);
}

#[test]
fn bench_emits_csv() {
    let (code, out, err) = call(&[
        "bench", "--variant", "both", "--mode", "addition", "--sweep", "4,6", "--k", "0,1", "--seeds", "2",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "variant,mode,n_students,n_questions,k,seed,cost,wall_ms");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(lines[1].starts_with("both,addition,4,4,0,"), "{}", lines[1]);
}
