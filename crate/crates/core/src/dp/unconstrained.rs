//! Students k-near their base order, questions free, additions only.
//!
//! With additions only, the cheapest neighborhood for the student at
//! position `i` is the union of the original neighborhoods of everyone at
//! positions `<= i`, so a subproblem needs no frontier question.

use fixedbitset::FixedBitSet;

use super::lattice::Lattice;
use super::table::{reconstruct, DpEntry, DpKind, DpStateKey, DpTable};
use super::DpOptions;
use crate::error::{ChainError, Result};
use crate::model::{Instance, Solution};

pub fn solve_unconstrained_knear_addition(inst: &Instance, k: usize) -> Result<Solution> {
    solve_unconstrained_knear_addition_with(inst, k, &DpOptions::default())
}

pub fn solve_unconstrained_knear_addition_with(inst: &Instance, k: usize, opts: &DpOptions) -> Result<Solution> {
    let table = unconstrained_addition_table(inst, k, opts)?;
    let terminal = table
        .best_terminal(inst.num_students())
        .ok_or_else(|| ChainError::Internal("unconstrained program has no terminal state".into()))?;
    reconstruct(&table, &terminal, inst)
}

pub fn unconstrained_addition_table(inst: &Instance, k: usize, opts: &DpOptions) -> Result<DpTable> {
    let alpha = inst.require_student_order()?;
    let n = inst.num_students();
    let m = inst.num_questions();
    let lattice = Lattice::build(n, k, opts.window_method)?;
    let geo = lattice.geo;

    let nb = |l: usize| inst.neighbors(alpha.at(l));
    // prefix_union[l] = union of the neighborhoods of labels 1..=l
    let mut prefix_union = vec![FixedBitSet::with_capacity(m + 1); n + 1];
    for l in 1..=n {
        let mut u = prefix_union[l - 1].clone();
        u.union_with(nb(l));
        prefix_union[l] = u;
    }

    let mut table = DpTable::new(DpKind::UnconstrainedAddition, k);
    let mut prev_cells: Vec<Option<u64>> = Vec::new();
    for i in 1..=n {
        let level = &lattice.levels[i];
        let prev_level = &lattice.levels[i - 1];
        let mut cells = Vec::with_capacity(level.states.len());
        for (s, wa) in level.states.iter().enumerate() {
            let mut union = prefix_union[geo.forced(i)].clone();
            for l in geo.window_members(wa) {
                union.union_with(nb(l));
            }
            let local = union.difference_count(nb(wa.occupant)) as u64;

            let (cost, parent) = if i == 1 {
                (Some(local), None)
            } else {
                let best = level.preds[s]
                    .iter()
                    .filter_map(|&p| prev_cells[p].map(|c| (c, prev_level.states[p].occupant, prev_level.states[p].prefix_mask, p)))
                    .min();
                match best {
                    Some((c, _, _, p)) => (Some(c + local), Some(p)),
                    None => (None, None),
                }
            };
            if let Some(cost) = cost {
                table.insert(
                    DpStateKey {
                        position: i,
                        window: *wa,
                        frontier_question: 0,
                        question_window: None,
                    },
                    DpEntry {
                        cost,
                        parent: parent.map(|p| DpStateKey {
                            position: i - 1,
                            window: prev_level.states[p],
                            frontier_question: 0,
                            question_window: None,
                        }),
                    },
                );
            }
            cells.push(cost);
        }
        prev_cells = cells;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Permutation;

    fn inst() -> Instance {
        Instance::from_rows(2, &[vec![1, 2], vec![1]])
            .unwrap()
            .with_base_orders(Some(Permutation::identity(2)), None)
            .unwrap()
    }

    #[test]
    fn fixed_order_needs_one_addition() {
        let sol = solve_unconstrained_knear_addition(&inst(), 0).unwrap();
        assert_eq!(sol.cost, 1);
        assert_eq!(sol.edits.additions.iter().copied().collect::<Vec<_>>(), vec![(2, 2)]);
    }

    #[test]
    fn swap_is_free() {
        let sol = solve_unconstrained_knear_addition(&inst(), 1).unwrap();
        assert_eq!(sol.cost, 0);
        assert_eq!(sol.student_order.order(), &[2, 1]);
        assert_eq!(sol.question_order.order(), &[1, 2]);
    }
}
