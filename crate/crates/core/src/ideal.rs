//! Polynomial procedures for the ideal regime: recognizing graphs that are
//! already chain graphs, turning a nested student order into a question
//! order, and optimally repairing a graph when one side's order is fixed.

use fixedbitset::FixedBitSet;

use crate::error::{ChainError, Result};
use crate::model::{EditSet, Instance, Mode, Permutation, Side, Solution};

/// Orders under which the unedited graph is already nested and interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingCertificate {
    pub student_order: Permutation,
    pub question_order: Permutation,
}

impl NestingCertificate {
    /// The certificate as a zero-cost solution.
    pub fn into_solution(self) -> Solution {
        Solution {
            cost: 0,
            student_order: self.student_order,
            question_order: self.question_order,
            edits: EditSet::default(),
            solver_tag: "ideal.recognize".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recognition {
    Ideal(NestingCertificate),
    /// Two students whose neighborhoods are incomparable under inclusion.
    NotIdeal { witness: (usize, usize) },
}

/// Decides whether every pair of student neighborhoods is comparable and, if
/// so, returns orders witnessing the chain structure.
///
/// Students are sorted by degree (ties by id); questions are layered by the
/// first student neighborhood that contains them.
pub fn recognize_ideal(inst: &Instance) -> Recognition {
    let n = inst.num_students();
    for a in 1..=n {
        for b in a + 1..=n {
            let na = inst.neighbors(a);
            let nb = inst.neighbors(b);
            if !na.is_subset(nb) && !nb.is_subset(na) {
                return Recognition::NotIdeal { witness: (a, b) };
            }
        }
    }
    let mut students: Vec<usize> = (1..=n).collect();
    students.sort_by_key(|&s| (inst.degree(s), s));
    let student_order = Permutation::from_order(students).expect("sorted ids form a permutation");
    let question_order =
        derive_question_order(inst, &student_order).expect("comparable neighborhoods nest along degree order");
    Recognition::Ideal(NestingCertificate {
        student_order,
        question_order,
    })
}

/// Question order in which every student's neighborhood is a prefix, given a
/// student order along which the neighborhoods are nested.
///
/// Questions first answered by the weakest student come first, then those
/// first answered by the next student, and so on; unanswered questions go
/// last. Within a layer questions keep ascending id order.
pub fn derive_question_order(inst: &Instance, student_order: &Permutation) -> Result<Permutation> {
    let n = inst.num_students();
    let m = inst.num_questions();
    if student_order.len() != n {
        return Err(ChainError::NotAPermutation {
            what: "student order",
            reason: format!("expected {n} entries, found {}", student_order.len()),
        });
    }
    for p in 1..n {
        if !inst
            .neighbors(student_order.at(p))
            .is_subset(inst.neighbors(student_order.at(p + 1)))
        {
            return Err(ChainError::NotNested { lower: p, upper: p + 1 });
        }
    }
    let mut placed = FixedBitSet::with_capacity(m + 1);
    let mut order = Vec::with_capacity(m);
    for p in 1..=n {
        for q in inst.neighbors(student_order.at(p)).ones() {
            if !placed.put(q) {
                order.push(q);
            }
        }
    }
    order.extend((1..=m).filter(|&q| !placed.contains(q)));
    Permutation::from_order(order)
}

/// Optimal edits when the order of one side is given.
///
/// With the questions fixed each student independently picks the prefix of
/// the question order closest to its neighborhood (smallest prefix among
/// ties); in addition mode the prefix must cover the hardest question the
/// student already answers. Students are then sorted by prefix length, ties
/// broken by base position (or id when there is no base order). Fixing the
/// students is the mirror image: each question picks a block of strongest
/// students.
pub fn solve_fixed_side(inst: &Instance, side: Side, fixed_order: &Permutation, mode: Mode) -> Result<Solution> {
    match side {
        Side::QuestionsFixed => questions_fixed(inst, fixed_order, mode),
        Side::StudentsFixed => students_fixed(inst, fixed_order, mode),
    }
}

/// Best threshold `t` in `lower..=len` for a member set `hits` laid out along
/// positions `1..=len`, where `hits[p]` says whether position `p` is a member
/// and the target set is the first `t` positions. Returns `(t, cost)`.
fn best_prefix(hits: &[bool], lower: usize) -> (usize, u64) {
    let len = hits.len() - 1;
    let total = hits.iter().filter(|&&h| h).count() as i64;
    // cost(t) = |members| + t - 2 * |members in first t|
    let mut inside = 0i64;
    let mut best = (usize::MAX, i64::MAX);
    for t in 0..=len {
        if t > 0 && hits[t] {
            inside += 1;
        }
        if t < lower {
            continue;
        }
        let cost = total + t as i64 - 2 * inside;
        if cost < best.1 {
            best = (t, cost);
        }
    }
    (best.0, best.1 as u64)
}

fn questions_fixed(inst: &Instance, order: &Permutation, mode: Mode) -> Result<Solution> {
    let n = inst.num_students();
    let m = inst.num_questions();
    if order.len() != m {
        return Err(ChainError::NotAPermutation {
            what: "fixed question order",
            reason: format!("expected {m} entries, found {}", order.len()),
        });
    }
    let mut thresholds = vec![0usize; n + 1];
    let mut edits = EditSet::default();
    let mut cost = 0;
    for s in 1..=n {
        let mut hits = vec![false; m + 1];
        let mut hardest = 0;
        for q in inst.neighbors(s).ones() {
            let p = order.position_of(q);
            hits[p] = true;
            hardest = hardest.max(p);
        }
        let lower = if mode == Mode::Addition { hardest } else { 0 };
        let (t, c) = best_prefix(&hits, lower);
        thresholds[s] = t;
        cost += c;
        let mut target = FixedBitSet::with_capacity(m + 1);
        for p in 1..=t {
            target.insert(order.at(p));
        }
        edits.record_student(s, inst.neighbors(s), &target);
    }
    let tie = |s: usize| inst.base_student_order().map_or(s, |b| b.position_of(s));
    let mut students: Vec<usize> = (1..=n).collect();
    students.sort_by_key(|&s| (thresholds[s], tie(s)));
    Ok(Solution {
        cost,
        student_order: Permutation::from_order(students)?,
        question_order: order.clone(),
        edits,
        solver_tag: format!("ideal.fixed-side.questions.{}", mode.name()),
    })
}

fn students_fixed(inst: &Instance, order: &Permutation, mode: Mode) -> Result<Solution> {
    let n = inst.num_students();
    let m = inst.num_questions();
    if order.len() != n {
        return Err(ChainError::NotAPermutation {
            what: "fixed student order",
            reason: format!("expected {n} entries, found {}", order.len()),
        });
    }
    // Each question keeps an up-set: the `t` strongest students. Position r
    // in `hits` is the r-th strongest student.
    let mut sizes = vec![0usize; m + 1];
    let mut added = Vec::new();
    let mut deleted = Vec::new();
    let mut cost = 0;
    for q in 1..=m {
        let mut hits = vec![false; n + 1];
        let mut weakest_rank = 0;
        for s in 1..=n {
            if inst.has_edge(s, q) {
                let r = n + 1 - order.position_of(s);
                hits[r] = true;
                weakest_rank = weakest_rank.max(r);
            }
        }
        let lower = if mode == Mode::Addition { weakest_rank } else { 0 };
        let (t, c) = best_prefix(&hits, lower);
        sizes[q] = t;
        cost += c;
        for r in 1..=n {
            let s = order.at(n + 1 - r);
            match (r <= t, hits[r]) {
                (true, false) => added.push((s, q)),
                (false, true) => deleted.push((s, q)),
                _ => {}
            }
        }
    }
    let tie = |q: usize| inst.base_question_order().map_or(q, |b| b.position_of(q));
    let mut questions: Vec<usize> = (1..=m).collect();
    questions.sort_by_key(|&q| (std::cmp::Reverse(sizes[q]), tie(q)));
    Ok(Solution {
        cost,
        student_order: order.clone(),
        question_order: Permutation::from_order(questions)?,
        edits: EditSet {
            additions: added.into_iter().collect(),
            deletions: deleted.into_iter().collect(),
        },
        solver_tag: format!("ideal.fixed-side.students.{}", mode.name()),
    })
}
