//! Brute-force reference solvers.
//!
//! Every ordering allowed by a problem is enumerated and the remaining
//! fixed-order problem is solved exactly. Nothing here shares code with the
//! dynamic programs, so agreement between the two is meaningful.

use fixedbitset::FixedBitSet;

use crate::error::{ChainError, Result};
use crate::ideal::solve_fixed_side;
use crate::model::{EditSet, Instance, Mode, Permutation, ProblemSpec, Side, Solution, Variant};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// Lexicographic stream of the permutations `π` with `|π(x) - base(x)| <= k`.
///
/// Positions are filled left to right. A base label that reaches its last
/// admissible position is forced there, which prunes dead branches early.
pub struct KNearPermutationStream {
    base: Permutation,
    k: usize,
    n: usize,
    labels: Vec<usize>,
    used: Vec<bool>,
    frames: Vec<(Vec<usize>, usize)>,
    started: bool,
    done: bool,
}

pub fn enumerate_knear_permutations(base: &Permutation, k: usize) -> KNearPermutationStream {
    let n = base.len();
    KNearPermutationStream {
        base: base.clone(),
        k: k.min(n),
        n,
        labels: Vec::with_capacity(n),
        used: vec![false; n + 1],
        frames: Vec::with_capacity(n),
        started: false,
        done: false,
    }
}

impl KNearPermutationStream {
    fn candidates(&self, p: usize) -> Vec<usize> {
        if p > self.k && !self.used[p - self.k] {
            return vec![p - self.k];
        }
        let lo = p.saturating_sub(self.k).max(1);
        let hi = (p + self.k).min(self.n);
        let mut out: Vec<usize> = (lo..=hi).filter(|&l| !self.used[l]).collect();
        out.sort_by_key(|&l| self.base.at(l));
        out
    }

    fn backtrack(&mut self) -> bool {
        while let Some((cands, idx)) = self.frames.last_mut() {
            let cur = self.labels.pop().expect("frame without label");
            self.used[cur] = false;
            if *idx + 1 < cands.len() {
                *idx += 1;
                let next = cands[*idx];
                self.used[next] = true;
                self.labels.push(next);
                return true;
            }
            self.frames.pop();
        }
        false
    }
}

impl Iterator for KNearPermutationStream {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.backtrack() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        loop {
            if self.labels.len() == self.n {
                let order = self.labels.iter().map(|&l| self.base.at(l)).collect();
                return Some(Permutation::from_order(order).expect("stream yields permutations"));
            }
            let cands = self.candidates(self.labels.len() + 1);
            if cands.is_empty() {
                if !self.backtrack() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            self.used[cands[0]] = true;
            self.labels.push(cands[0]);
            self.frames.push((cands, 0));
        }
    }
}

/// How the question order is chosen once the student order is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuestionConstraint {
    Free,
    Exact(Permutation),
    KNear(Permutation, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerResult {
    pub cost: u64,
    pub question_order: Permutation,
    pub edits: EditSet,
}

/// Optimal edits for a fixed student order under `constraint`.
pub fn inner_fixed_orders_cost(
    inst: &Instance,
    student_order: &Permutation,
    constraint: &QuestionConstraint,
    mode: Mode,
) -> InnerResult {
    match constraint {
        QuestionConstraint::Free => inner_free(inst, student_order, mode),
        QuestionConstraint::Exact(beta) => inner_exact(inst, student_order, beta, mode),
        QuestionConstraint::KNear(base, k) => {
            let mut best: Option<InnerResult> = None;
            for beta in enumerate_knear_permutations(base, *k) {
                let r = inner_exact(inst, student_order, &beta, mode);
                if best.as_ref().is_none_or(|b| r.cost < b.cost) {
                    best = Some(r);
                }
            }
            best.expect("at least one question order")
        }
    }
}

/// Each question independently keeps its strongest `t` students.
fn inner_free(inst: &Instance, pi: &Permutation, mode: Mode) -> InnerResult {
    let n = inst.num_students();
    let m = inst.num_questions();
    let mut size = vec![0usize; m + 1];
    let mut edits = EditSet::default();
    for q in 1..=m {
        // rank r = 1 is the strongest student
        let answered: Vec<bool> = (0..=n).map(|r| r > 0 && inst.has_edge(pi.at(n + 1 - r), q)).collect();
        let weakest = (1..=n).filter(|&r| answered[r]).max().unwrap_or(0);
        let lower = if mode == Mode::Addition { weakest } else { 0 };
        let mut best = (u64::MAX, 0);
        for t in lower..=n {
            let c = (1..=n).filter(|&r| (r <= t) != answered[r]).count() as u64;
            if c < best.0 {
                best = (c, t);
            }
        }
        size[q] = best.1;
        for r in 1..=n {
            let s = pi.at(n + 1 - r);
            if r <= best.1 && !answered[r] {
                edits.additions.insert((s, q));
            } else if r > best.1 && answered[r] {
                edits.deletions.insert((s, q));
            }
        }
    }
    let mut questions: Vec<usize> = (1..=m).collect();
    questions.sort_by_key(|&q| (std::cmp::Reverse(size[q]), q));
    InnerResult {
        cost: edits.len() as u64,
        question_order: Permutation::from_order(questions).expect("sorted ids"),
        edits,
    }
}

/// Non-decreasing prefix lengths along `pi`, one per student.
fn inner_exact(inst: &Instance, pi: &Permutation, beta: &Permutation, mode: Mode) -> InnerResult {
    let n = inst.num_students();
    let m = inst.num_questions();
    let local = |s: usize, t: usize| -> Option<u64> {
        let mut c = 0;
        for p in 1..=m {
            let has = inst.has_edge(s, beta.at(p));
            if has && p > t && mode == Mode::Addition {
                return None;
            }
            if has != (p <= t) {
                c += 1;
            }
        }
        Some(c)
    };
    // f[i][t]: best cost of the i weakest students with the i-th at prefix t
    let mut f = vec![vec![None::<u64>; m + 1]; n + 1];
    let mut arg = vec![vec![0usize; m + 1]; n + 1];
    f[0][0] = Some(0);
    for i in 1..=n {
        let s = pi.at(i);
        let mut run: Option<(u64, usize)> = None;
        for t in 0..=m {
            if let Some(c) = f[i - 1][t] {
                if run.is_none_or(|(rc, _)| c < rc) {
                    run = Some((c, t));
                }
            }
            if let (Some((rc, rt)), Some(l)) = (run, local(s, t)) {
                f[i][t] = Some(rc + l);
                arg[i][t] = rt;
            }
        }
    }
    let mut t = (0..=m)
        .filter(|&t| f[n][t].is_some())
        .min_by_key(|&t| f[n][t])
        .expect("the full prefix is always feasible");
    let cost = f[n][t].unwrap();
    let mut thresholds = vec![0usize; n + 1];
    for i in (1..=n).rev() {
        thresholds[i] = t;
        t = arg[i][t];
    }
    let mut edits = EditSet::default();
    for i in 1..=n {
        let s = pi.at(i);
        let mut target = FixedBitSet::with_capacity(m + 1);
        for p in 1..=thresholds[i] {
            target.insert(beta.at(p));
        }
        edits.record_student(s, inst.neighbors(s), &target);
    }
    debug_assert_eq!(edits.len() as u64, cost);
    InnerResult {
        cost,
        question_order: beta.clone(),
        edits,
    }
}

fn collect_capped(stream: KNearPermutationStream, cap: u64) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    for p in stream {
        if out.len() as u64 >= cap {
            return Err(ChainError::InstanceTooLarge { cap });
        }
        out.push(p);
    }
    Ok(out)
}

pub fn oracle_solve(inst: &Instance, spec: &ProblemSpec) -> Result<Solution> {
    oracle_solve_with(inst, spec, DEFAULT_CAP)
}

/// Exact optimum by enumeration. At most `cap` orderings (student orders
/// times question orders) are examined before giving up.
pub fn oracle_solve_with(inst: &Instance, spec: &ProblemSpec, cap: u64) -> Result<Solution> {
    spec.check_instance(inst)?;
    let n = inst.num_students();
    let mode = spec.mode;
    let alpha = inst.base_student_order().cloned().unwrap_or_else(|| Permutation::identity(n));
    let (students, constraint, inner_mode) = match spec.variant {
        Variant::ImoRecognize => (enumerate_knear_permutations(&alpha, n), QuestionConstraint::Free, Mode::Editing),
        Variant::FixedBothCheck => (
            enumerate_knear_permutations(&alpha, 0),
            QuestionConstraint::Exact(inst.require_question_order()?.clone()),
            Mode::Editing,
        ),
        Variant::FixedOneSide(Side::StudentsFixed) => {
            (enumerate_knear_permutations(&alpha, 0), QuestionConstraint::Free, mode)
        }
        Variant::FixedOneSide(Side::QuestionsFixed) => (
            enumerate_knear_permutations(&alpha, n),
            QuestionConstraint::Exact(inst.require_question_order()?.clone()),
            mode,
        ),
        Variant::ConstrainedKnear => (
            enumerate_knear_permutations(&alpha, spec.k),
            QuestionConstraint::Exact(inst.require_question_order()?.clone()),
            mode,
        ),
        Variant::UnconstrainedKnear => (enumerate_knear_permutations(&alpha, spec.k), QuestionConstraint::Free, mode),
        Variant::BothKnear => (
            enumerate_knear_permutations(&alpha, spec.k),
            QuestionConstraint::KNear(inst.require_question_order()?.clone(), spec.k),
            mode,
        ),
    };
    let per_student = match &constraint {
        QuestionConstraint::KNear(base, k) => collect_capped(enumerate_knear_permutations(base, *k), cap)?.len() as u64,
        _ => 1,
    };

    let mut seen = 0u64;
    let mut best: Option<(InnerResult, Permutation)> = None;
    for pi in students {
        seen = seen.saturating_add(per_student);
        if seen > cap {
            return Err(ChainError::InstanceTooLarge { cap });
        }
        let r = inner_fixed_orders_cost(inst, &pi, &constraint, inner_mode);
        if best.as_ref().is_none_or(|(b, _)| r.cost < b.cost) {
            best = Some((r, pi));
        }
    }
    let (inner, student_order) = best.expect("at least one student order");
    if !spec.allows_edits() && inner.cost > 0 {
        return Err(ChainError::Infeasible(format!(
            "no orders admit the graph without edits (best needs {})",
            inner.cost
        )));
    }
    Ok(Solution {
        cost: inner.cost,
        student_order,
        question_order: inner.question_order,
        edits: inner.edits,
        solver_tag: format!("oracle.{}.{}", spec.variant.name(), mode.name()),
    })
}


pub fn solve_unconstrained_knear_editing_exact(inst: &Instance, k: usize) -> Result<Solution> {
    solve_unconstrained_knear_editing_exact_with(inst, k, DEFAULT_CAP)
}

/// Exponential exact solver for unconstrained k-near editing: every k-near
/// student order, each completed by the fixed-students procedure.
pub fn solve_unconstrained_knear_editing_exact_with(inst: &Instance, k: usize, cap: u64) -> Result<Solution> {
    let alpha = inst.require_student_order()?;
    let mut seen = 0u64;
    let mut best: Option<Solution> = None;
    for pi in enumerate_knear_permutations(alpha, k) {
        seen += 1;
        if seen > cap {
            return Err(ChainError::InstanceTooLarge { cap });
        }
        let sol = solve_fixed_side(inst, Side::StudentsFixed, &pi, Mode::Editing)?;
        if best.as_ref().is_none_or(|b| sol.cost < b.cost) {
            best = Some(sol);
        }
    }
    let mut sol = best.expect("at least one student order");
    sol.solver_tag = "exact.unconstrained.editing".into();
    Ok(sol)
}
