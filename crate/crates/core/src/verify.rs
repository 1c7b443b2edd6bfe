//! Feasibility checker for solutions.
//!
//! Shares nothing with the solvers beyond the core types: every property is
//! re-derived from the edited graph with plain membership tests.

use std::fmt;

use crate::model::{apply_edits, Instance, Mode, Permutation, ProblemSpec, Side, Solution, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    EditSetValid,
    CostConsistent,
    OrderSizes,
    Nested,
    Interval,
    StudentsKNear,
    QuestionsKNear,
    StudentsFixed,
    QuestionsFixed,
    ModeCompliance,
    NoEditsAllowed,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::EditSetValid => "edit-set",
            Check::CostConsistent => "cost",
            Check::OrderSizes => "order-sizes",
            Check::Nested => "nested",
            Check::Interval => "interval",
            Check::StudentsKNear => "students-k-near",
            Check::QuestionsKNear => "questions-k-near",
            Check::StudentsFixed => "students-fixed",
            Check::QuestionsFixed => "questions-fixed",
            Check::ModeCompliance => "mode",
            Check::NoEditsAllowed => "no-edits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, check: Check) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    /// True when `check` ran and failed.
    pub fn failed(&self, check: Check) -> bool {
        self.outcome(check).is_some_and(|o| !o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    fn push(&mut self, check: Check, passed: bool, detail: impl Into<String>) {
        self.outcomes.push(CheckOutcome {
            check,
            passed,
            detail: if passed { String::new() } else { detail.into() },
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            if o.passed {
                writeln!(f, "{}: ok", o.check.name())?;
            } else {
                writeln!(f, "{}: FAILED ({})", o.check.name(), o.detail)?;
            }
        }
        Ok(())
    }
}

/// Checks `sol` against every constraint `spec` places on it over `inst`.
/// Failures are report entries, never errors.
pub fn verify_solution(inst: &Instance, spec: &ProblemSpec, sol: &Solution) -> VerificationReport {
    let mut report = VerificationReport::default();
    let n = inst.num_students();
    let m = inst.num_questions();

    let edit_count = (sol.edits.additions.len() + sol.edits.deletions.len()) as u64;
    report.push(
        Check::CostConsistent,
        sol.cost == edit_count,
        format!("cost field {} but {} edits", sol.cost, edit_count),
    );

    let edited = match apply_edits(inst, &sol.edits) {
        Ok(g) => {
            report.push(Check::EditSetValid, true, "");
            Some(g)
        }
        Err(e) => {
            report.push(Check::EditSetValid, false, e.to_string());
            None
        }
    };

    let sizes_ok = sol.student_order.len() == n && sol.question_order.len() == m;
    report.push(
        Check::OrderSizes,
        sizes_ok,
        format!(
            "orders have {} students and {} questions, instance has {n} and {m}",
            sol.student_order.len(),
            sol.question_order.len()
        ),
    );

    if let (Some(g), true) = (&edited, sizes_ok) {
        let (nested, detail) = check_nested(g, &sol.student_order);
        report.push(Check::Nested, nested, detail);
        let (interval, detail) = check_interval(g, &sol.question_order);
        report.push(Check::Interval, interval, detail);
    } else {
        report.push(Check::Nested, false, "graph or orders unusable");
        report.push(Check::Interval, false, "graph or orders unusable");
    }

    if sizes_ok {
        match spec.variant {
            Variant::ConstrainedKnear | Variant::UnconstrainedKnear | Variant::BothKnear => {
                push_knear(&mut report, Check::StudentsKNear, inst.base_student_order(), &sol.student_order, spec.k);
            }
            _ => {}
        }
        if spec.variant == Variant::BothKnear {
            push_knear(&mut report, Check::QuestionsKNear, inst.base_question_order(), &sol.question_order, spec.k);
        }
        let students_fixed = matches!(
            spec.variant,
            Variant::FixedBothCheck | Variant::FixedOneSide(Side::StudentsFixed)
        );
        let questions_fixed = matches!(
            spec.variant,
            Variant::FixedBothCheck | Variant::FixedOneSide(Side::QuestionsFixed) | Variant::ConstrainedKnear
        );
        if students_fixed {
            push_fixed(&mut report, Check::StudentsFixed, inst.base_student_order(), &sol.student_order);
        }
        if questions_fixed {
            push_fixed(&mut report, Check::QuestionsFixed, inst.base_question_order(), &sol.question_order);
        }
    }

    if spec.mode == Mode::Addition {
        report.push(
            Check::ModeCompliance,
            sol.edits.deletions.is_empty(),
            format!("{} deletions in addition mode", sol.edits.deletions.len()),
        );
    }
    if matches!(spec.variant, Variant::ImoRecognize | Variant::FixedBothCheck) {
        report.push(
            Check::NoEditsAllowed,
            sol.edits.additions.is_empty() && sol.edits.deletions.is_empty(),
            "variant does not allow edits",
        );
    }
    report
}

fn check_nested(g: &Instance, order: &Permutation) -> (bool, String) {
    let m = g.num_questions();
    for p in 1..order.len() {
        let weaker = order.at(p);
        let stronger = order.at(p + 1);
        for q in 1..=m {
            if g.has_edge(weaker, q) && !g.has_edge(stronger, q) {
                return (
                    false,
                    format!("student {weaker} (position {p}) answers question {q} but stronger student {stronger} does not"),
                );
            }
        }
    }
    (true, String::new())
}

fn check_interval(g: &Instance, order: &Permutation) -> (bool, String) {
    for s in 1..=g.num_students() {
        let mut seen_gap = false;
        for p in 1..=order.len() {
            let answered = g.has_edge(s, order.at(p));
            if answered && seen_gap {
                return (
                    false,
                    format!("student {s}'s neighborhood is not a prefix of the question order (gap before position {p})"),
                );
            }
            if !answered {
                seen_gap = true;
            }
        }
    }
    (true, String::new())
}

fn push_knear(
    report: &mut VerificationReport,
    check: Check,
    base: Option<&Permutation>,
    order: &Permutation,
    k: usize,
) {
    match base {
        None => report.push(check, false, "instance has no base order"),
        Some(base) => {
            let worst = (1..=order.len())
                .map(|e| order.position_of(e).abs_diff(base.position_of(e)))
                .max()
                .unwrap_or(0);
            report.push(check, worst <= k, format!("displacement {worst} exceeds k={k}"));
        }
    }
}

fn push_fixed(report: &mut VerificationReport, check: Check, base: Option<&Permutation>, order: &Permutation) {
    match base {
        None => report.push(check, false, "instance has no base order"),
        Some(base) => report.push(check, base == order, "order differs from the base order"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EditSet;

    fn staircase() -> Instance {
        Instance::from_rows(5, &[vec![1, 2], vec![1, 2, 3, 4], vec![1, 2, 3, 4, 5]])
            .unwrap()
            .with_base_orders(Some(Permutation::identity(3)), Some(Permutation::identity(5)))
            .unwrap()
    }

    fn sol(students: Vec<usize>, questions: Vec<usize>) -> Solution {
        Solution {
            cost: 0,
            student_order: Permutation::from_order(students).unwrap(),
            question_order: Permutation::from_order(questions).unwrap(),
            edits: EditSet::default(),
            solver_tag: "test".into(),
        }
    }

    #[test]
    fn staircase_passes_everything() {
        let spec = ProblemSpec::new(Variant::BothKnear, Mode::Editing, 0);
        let report = verify_solution(&staircase(), &spec, &sol(vec![1, 2, 3], vec![1, 2, 3, 4, 5]));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn reversal_breaks_nesting() {
        let spec = ProblemSpec::new(Variant::UnconstrainedKnear, Mode::Editing, 3);
        let report = verify_solution(&staircase(), &spec, &sol(vec![3, 1, 2], vec![1, 2, 3, 4, 5]));
        assert!(report.failed(Check::Nested));
        assert!(!report.failed(Check::Interval));
    }

    #[test]
    fn zero_displacement_forces_identity() {
        let inst = Instance::from_rows(1, &[vec![1], vec![1]])
            .unwrap()
            .with_base_orders(Some(Permutation::identity(2)), Some(Permutation::identity(1)))
            .unwrap();
        let spec = ProblemSpec::new(Variant::ConstrainedKnear, Mode::Editing, 0);
        let report = verify_solution(&inst, &spec, &sol(vec![2, 1], vec![1]));
        assert!(report.failed(Check::StudentsKNear));
        assert!(!report.failed(Check::Nested));
    }

    #[test]
    fn tampered_cost_and_mode() {
        let inst = staircase();
        let mut s = sol(vec![1, 2, 3], vec![1, 2, 3, 4, 5]);
        s.edits.deletions.insert((1, 2));
        s.cost = 0;
        let spec = ProblemSpec::new(Variant::ConstrainedKnear, Mode::Addition, 1);
        let report = verify_solution(&inst, &spec, &s);
        assert!(report.failed(Check::CostConsistent));
        assert!(report.failed(Check::ModeCompliance));
        assert!(!report.failed(Check::Nested));
    }

    #[test]
    fn bad_edit_set_reported() {
        let inst = staircase();
        let mut s = sol(vec![1, 2, 3], vec![1, 2, 3, 4, 5]);
        s.edits.additions.insert((1, 1));
        s.cost = 1;
        let spec = ProblemSpec::new(Variant::UnconstrainedKnear, Mode::Editing, 1);
        let report = verify_solution(&inst, &spec, &s);
        assert!(report.failed(Check::EditSetValid));
    }

    #[test]
    fn gap_in_question_order_fails_interval() {
        let spec = ProblemSpec::new(Variant::FixedOneSide(Side::QuestionsFixed), Mode::Editing, 0);
        let report = verify_solution(&staircase(), &spec, &sol(vec![1, 2, 3], vec![1, 3, 2, 4, 5]));
        assert!(report.failed(Check::Interval));
        assert!(report.failed(Check::QuestionsFixed));
    }
}
