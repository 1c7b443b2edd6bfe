//! One entry point that routes a problem to the right solver.

use crate::dp::{solve_both_knear, solve_constrained_knear, solve_unconstrained_knear_addition};
use crate::error::{ChainError, Result};
use crate::ideal::{recognize_ideal, solve_fixed_side, Recognition};
use crate::model::{EditSet, Instance, Mode, ProblemSpec, Side, Solution, Variant};
use crate::oracle::solve_unconstrained_knear_editing_exact;

/// Solves `spec` on `inst` with the polynomial solver for its variant.
///
/// Unconstrained k-near editing has no polynomial solver; it runs the
/// exponential exact search only when `allow_exponential` is set.
pub fn solve(inst: &Instance, spec: &ProblemSpec, allow_exponential: bool) -> Result<Solution> {
    spec.check_instance(inst)?;
    match spec.variant {
        Variant::ImoRecognize => match recognize_ideal(inst) {
            Recognition::Ideal(cert) => Ok(cert.into_solution()),
            Recognition::NotIdeal { witness } => Err(ChainError::NotIdeal(witness.0, witness.1)),
        },
        Variant::FixedBothCheck => check_fixed_both(inst),
        Variant::FixedOneSide(side) => {
            let order = match side {
                Side::StudentsFixed => inst.require_student_order()?,
                Side::QuestionsFixed => inst.require_question_order()?,
            };
            solve_fixed_side(inst, side, order, spec.mode)
        }
        Variant::ConstrainedKnear => solve_constrained_knear(inst, spec.k, spec.mode),
        Variant::UnconstrainedKnear => match spec.mode {
            Mode::Addition => solve_unconstrained_knear_addition(inst, spec.k),
            Mode::Editing if allow_exponential => solve_unconstrained_knear_editing_exact(inst, spec.k),
            Mode::Editing => Err(ChainError::InvalidConfig(
                "unconstrained k-near editing is NP-hard; use the exponential exact solver (`oracle`, or \
                 `solve --exponential-ok`)"
                    .into(),
            )),
        },
        Variant::BothKnear => solve_both_knear(inst, spec.k, spec.mode),
    }
}

/// Both base orders as given, no edits: every neighborhood must be a prefix
/// of the question order and prefixes must grow along the student order.
fn check_fixed_both(inst: &Instance) -> Result<Solution> {
    let alpha = inst.require_student_order()?;
    let beta = inst.require_question_order()?;
    let mut last = 0;
    for pos in 1..=alpha.len() {
        let s = alpha.at(pos);
        let d = inst.degree(s);
        if let Some(p) = (1..=d).find(|&p| !inst.has_edge(s, beta.at(p))) {
            return Err(ChainError::Infeasible(format!(
                "student {s} misses question {} inside its prefix",
                beta.at(p)
            )));
        }
        if d < last {
            return Err(ChainError::Infeasible(format!(
                "student {s} answers fewer questions than the student below it"
            )));
        }
        last = d;
    }
    Ok(Solution {
        cost: 0,
        student_order: alpha.clone(),
        question_order: beta.clone(),
        edits: EditSet::default(),
        solver_tag: "check.fixed-both".into(),
    })
}
