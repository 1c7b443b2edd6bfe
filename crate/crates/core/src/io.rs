//! Plain-text instance and solution files.
//!
//! Instance file:
//!
//! ```text
//! chainrank v1 3 5
//! 11000
//! 11110
//! 11111
//! students: 1 2 3
//! questions: 1 2 3 4 5
//! ```
//!
//! Row `s`, column `q` is `1` when student `s` answered question `q`. The
//! order lines are optional and list entities from position 1 (weakest
//! student, easiest question). `#` starts a comment.
//!
//! Solution file: one `key: value` per line. Pair lists are written as
//! `s q, s q`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{ChainError, Result};
use crate::model::{validate_instance, EditSet, Instance, InstanceData, Mode, Permutation, ProblemSpec, Solution, Variant};

pub const HEADER: &str = "chainrank";
pub const FORMAT_VERSION: &str = "v1";

fn parse_err(line: usize, message: impl Into<String>) -> ChainError {
    ChainError::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_list(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("`{t}` is not a positive integer"))))
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `chainrank v1 <students> <questions>` header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != HEADER || parts[1] != FORMAT_VERSION {
        return Err(parse_err(hline, "missing `chainrank v1 <students> <questions>` header"));
    }
    let dims = parse_list(hline, &parts[2..].join(" "))?;
    let (n, m) = (dims[0], dims[1]);

    let mut edges = Vec::new();
    let mut rows = 0;
    let mut students = None;
    let mut questions = None;
    let mut last = hline;
    for (no, line) in lines {
        last = no;
        if let Some(rest) = line.strip_prefix("students:") {
            if students.replace(parse_list(no, rest)?).is_some() {
                return Err(parse_err(no, "second `students:` line"));
            }
        } else if let Some(rest) = line.strip_prefix("questions:") {
            if questions.replace(parse_list(no, rest)?).is_some() {
                return Err(parse_err(no, "second `questions:` line"));
            }
        } else {
            if rows == n {
                return Err(parse_err(no, format!("more than {n} rows")));
            }
            if line.len() != m {
                return Err(parse_err(no, format!("row has {} entries, expected {m}", line.len())));
            }
            rows += 1;
            for (q, c) in line.chars().enumerate() {
                match c {
                    '1' => edges.push((rows, q + 1)),
                    '0' => {}
                    _ => return Err(parse_err(no, format!("unexpected character `{c}` in row"))),
                }
            }
        }
    }
    if rows != n {
        return Err(parse_err(last, format!("found {rows} rows, expected {n}")));
    }
    validate_instance(InstanceData {
        num_students: n,
        num_questions: m,
        edges,
        base_student_order: students,
        base_question_order: questions,
    })
}

pub fn write_instance_string(inst: &Instance) -> String {
    let mut out = format!(
        "{HEADER} {FORMAT_VERSION} {} {}\n",
        inst.num_students(),
        inst.num_questions()
    );
    for s in 1..=inst.num_students() {
        out.extend((1..=inst.num_questions()).map(|q| if inst.has_edge(s, q) { '1' } else { '0' }));
        out.push('\n');
    }
    if let Some(p) = inst.base_student_order() {
        let _ = writeln!(out, "students: {}", join(p.order()));
    }
    if let Some(p) = inst.base_question_order() {
        let _ = writeln!(out, "questions: {}", join(p.order()));
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    Ok(std::fs::write(path, write_instance_string(inst))?)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_pairs(pairs: &BTreeSet<(usize, usize)>) -> String {
    pairs.iter().map(|(s, q)| format!("{s} {q}")).collect::<Vec<_>>().join(", ")
}

/// A solution plus the problem it answers and the verifier's verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub solution: Solution,
    pub spec: Option<ProblemSpec>,
    pub verified: Option<bool>,
}

pub fn write_solution_string(file: &SolutionFile) -> String {
    let sol = &file.solution;
    let mut out = String::new();
    let _ = writeln!(out, "cost: {}", sol.cost);
    let _ = writeln!(out, "student_order: {}", join(sol.student_order.order()));
    let _ = writeln!(out, "question_order: {}", join(sol.question_order.order()));
    let _ = writeln!(out, "additions: {}", join_pairs(&sol.edits.additions));
    let _ = writeln!(out, "deletions: {}", join_pairs(&sol.edits.deletions));
    let _ = writeln!(out, "solver_tag: {}", sol.solver_tag);
    if let Some(spec) = &file.spec {
        let _ = writeln!(out, "variant: {}", spec.variant.name());
        let _ = writeln!(out, "mode: {}", spec.mode.name());
        let _ = writeln!(out, "k: {}", spec.k);
    }
    if let Some(v) = file.verified {
        let _ = writeln!(out, "verified: {v}");
    }
    out.split('\n')
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_pairs(line: usize, text: &str) -> Result<BTreeSet<(usize, usize)>> {
    let mut out = BTreeSet::new();
    for chunk in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        match parse_list(line, chunk)?.as_slice() {
            [s, q] => {
                if !out.insert((*s, *q)) {
                    return Err(parse_err(line, format!("pair `{chunk}` listed twice")));
                }
            }
            _ => return Err(parse_err(line, format!("`{chunk}` is not a `student question` pair"))),
        }
    }
    Ok(out)
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let keys = [
        "cost",
        "student_order",
        "question_order",
        "additions",
        "deletions",
        "solver_tag",
        "variant",
        "mode",
        "k",
        "verified",
    ];
    let mut values: Vec<Option<(usize, String)>> = vec![None; keys.len()];
    let mut last = 1;
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        last = no;
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, "expected `key: value`"))?;
        let idx = keys
            .iter()
            .position(|k| *k == key.trim())
            .ok_or_else(|| parse_err(no, format!("unknown key `{}`", key.trim())))?;
        if values[idx].replace((no, value.trim().to_string())).is_some() {
            return Err(parse_err(no, format!("key `{}` given twice", keys[idx])));
        }
    }
    let get = |name: &str| values[keys.iter().position(|k| *k == name).unwrap()].clone();
    let need = |name: &str| get(name).ok_or_else(|| parse_err(last, format!("missing key `{name}`")));

    let (cl, cost) = need("cost")?;
    let cost = cost.parse().map_err(|_| parse_err(cl, "cost is not a non-negative integer"))?;
    let (sl, so) = need("student_order")?;
    let student_order = Permutation::from_order(parse_list(sl, &so)?).map_err(|e| parse_err(sl, e.to_string()))?;
    let (ql, qo) = need("question_order")?;
    let question_order = Permutation::from_order(parse_list(ql, &qo)?).map_err(|e| parse_err(ql, e.to_string()))?;
    let (al, adds) = need("additions")?;
    let (dl, dels) = need("deletions")?;
    let edits = EditSet {
        additions: parse_pairs(al, &adds)?,
        deletions: parse_pairs(dl, &dels)?,
    };
    let (_, solver_tag) = need("solver_tag")?;

    let spec = match (get("variant"), get("mode"), get("k")) {
        (None, None, None) => None,
        (Some((vl, v)), Some((ml, m)), Some((kl, k))) => Some(ProblemSpec::new(
            Variant::from_name(&v).ok_or_else(|| parse_err(vl, format!("unknown variant `{v}`")))?,
            Mode::from_name(&m).ok_or_else(|| parse_err(ml, format!("unknown mode `{m}`")))?,
            k.parse().map_err(|_| parse_err(kl, "k is not a non-negative integer"))?,
        )),
        _ => return Err(parse_err(last, "`variant`, `mode` and `k` must be given together")),
    };
    let verified = match get("verified") {
        None => None,
        Some((_, v)) if v == "true" => Some(true),
        Some((_, v)) if v == "false" => Some(false),
        Some((l, v)) => return Err(parse_err(l, format!("verified must be true or false, not `{v}`"))),
    };
    Ok(SolutionFile {
        solution: Solution {
            cost,
            student_order,
            question_order,
            edits,
            solver_tag,
        },
        spec,
        verified,
    })
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<SolutionFile> {
    parse_solution(&std::fs::read_to_string(path)?)
}

pub fn write_solution(path: impl AsRef<Path>, file: &SolutionFile) -> Result<()> {
    Ok(std::fs::write(path, write_solution_string(file))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAIRCASE: &str = "chainrank v1 3 5\n11000\n11110\n11111\n";

    #[test]
    fn reads_staircase() {
        let inst = parse_instance(STAIRCASE).unwrap();
        assert_eq!((inst.num_students(), inst.num_questions()), (3, 5));
        assert_eq!(inst.degree(2), 4);
        assert_eq!(write_instance_string(&inst), STAIRCASE);
    }

    #[test]
    fn instance_errors_carry_lines() {
        assert_eq!(
            parse_instance("11000\n").unwrap_err(),
            parse_err(1, "missing `chainrank v1 <students> <questions>` header")
        );
        assert!(matches!(parse_instance(""), Err(ChainError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_instance("chainrank v1 2 3\n# c\n110\n11\n"),
            Err(ChainError::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_instance("chainrank v1 1 2\n1x\n"),
            Err(ChainError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("chainrank v1 2 2\n11\n"),
            Err(ChainError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("chainrank v1 2 2\n11\n10\nstudents: 1 1\n"),
            Err(ChainError::NotAPermutation { .. })
        ));
    }

    #[test]
    fn orders_and_comments() {
        let text = "# made by hand\nchainrank v1 2 2  # header\n10\nstudents: 2 1\n11\nquestions: 2 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.base_student_order().unwrap().order(), &[2, 1]);
        assert_eq!(inst.base_question_order().unwrap().order(), &[2, 1]);
        assert_eq!(parse_instance(&write_instance_string(&inst)).unwrap(), inst);
    }

    #[test]
    fn solution_round_trip() {
        let file = SolutionFile {
            solution: Solution {
                cost: 2,
                student_order: Permutation::from_order(vec![2, 1]).unwrap(),
                question_order: Permutation::identity(3),
                edits: EditSet {
                    additions: [(1, 3)].into_iter().collect(),
                    deletions: [(2, 1)].into_iter().collect(),
                },
                solver_tag: "dp.constrained.editing".into(),
            },
            spec: Some(ProblemSpec::new(Variant::ConstrainedKnear, Mode::Editing, 1)),
            verified: Some(true),
        };
        let text = write_solution_string(&file);
        assert!(text.contains("additions: 1 3\n"));
        assert_eq!(parse_solution(&text).unwrap(), file);

        let bare = SolutionFile {
            spec: None,
            verified: None,
            solution: Solution {
                edits: EditSet::default(),
                ..file.solution.clone()
            },
        };
        let text = write_solution_string(&bare);
        assert!(text.contains("deletions:\n"));
        assert_eq!(parse_solution(&text).unwrap(), bare);
    }

    #[test]
    fn solution_errors() {
        assert!(matches!(parse_solution("cost: 1\n"), Err(ChainError::Parse { .. })));
        assert!(matches!(
            parse_solution("cost: 1\ncost: 2\n"),
            Err(ChainError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_solution("colour: red\n"), Err(ChainError::Parse { line: 1, .. })));
    }
}
