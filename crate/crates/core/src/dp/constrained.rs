//! Students k-near their base order, questions exactly at theirs.
//!
//! A subproblem fixes the occupant of position `i`, the set of students
//! before it and the frontier `v`: the hardest question (by base position)
//! answered by the `i` weakest students. The occupant's neighborhood becomes
//! exactly the first `v` questions, and frontiers never decrease along the
//! student order.

use super::lattice::Lattice;
use super::table::{reconstruct, DpEntry, DpKind, DpStateKey, DpTable};
use super::DpOptions;
use crate::error::{ChainError, Result};
use crate::model::{Instance, Mode, Solution};

pub fn solve_constrained_knear(inst: &Instance, k: usize, mode: Mode) -> Result<Solution> {
    solve_constrained_knear_with(inst, k, mode, &DpOptions::default())
}

pub fn solve_constrained_knear_with(inst: &Instance, k: usize, mode: Mode, opts: &DpOptions) -> Result<Solution> {
    let table = constrained_table(inst, k, mode, opts)?;
    let terminal = table
        .best_terminal(inst.num_students())
        .ok_or_else(|| ChainError::Internal("constrained program has no terminal state".into()))?;
    reconstruct(&table, &terminal, inst)
}

/// (cost, occupant, frontier, mask) of the best predecessor seen so far.
type Best = (u64, usize, usize, u64);

pub fn constrained_table(inst: &Instance, k: usize, mode: Mode, opts: &DpOptions) -> Result<DpTable> {
    let alpha = inst.require_student_order()?;
    let beta = inst.require_question_order()?;
    let n = inst.num_students();
    let m = inst.num_questions();
    let lattice = Lattice::build(n, k, opts.window_method)?;
    let geo = lattice.geo;

    // inside[l][v] = number of label l's questions among the first v
    let mut inside = vec![vec![0u64; m + 1]; n + 1];
    let mut hardest = vec![0usize; n + 1];
    for l in 1..=n {
        let mut hit = vec![false; m + 1];
        for q in inst.neighbors(alpha.at(l)).ones() {
            let p = beta.position_of(q);
            hit[p] = true;
            hardest[l] = hardest[l].max(p);
        }
        for v in 1..=m {
            inside[l][v] = inside[l][v - 1] + hit[v] as u64;
        }
    }
    let mut prefix_hardest = vec![0usize; n + 1];
    for l in 1..=n {
        prefix_hardest[l] = prefix_hardest[l - 1].max(hardest[l]);
    }

    let mut table = DpTable::new(DpKind::Constrained(mode), k);
    // cells[state][v] = (cost, parent (state, v)) at the previous level
    let mut prev_cells: Vec<Vec<Option<(u64, Option<(usize, usize)>)>>> = Vec::new();
    for i in 1..=n {
        let level = &lattice.levels[i];
        let prev_level = &lattice.levels[i - 1];

        // running minimum over frontiers <= v for every previous state
        let prefmin: Vec<Vec<Option<Best>>> = prev_cells
            .iter()
            .enumerate()
            .map(|(p, cells)| {
                let wa = prev_level.states[p];
                let mut run: Option<Best> = None;
                cells
                    .iter()
                    .enumerate()
                    .map(|(v, cell)| {
                        if let Some((c, _)) = cell {
                            let cand = (*c, wa.occupant, v, wa.prefix_mask);
                            if run.is_none_or(|r| cand < r) {
                                run = Some(cand);
                            }
                        }
                        run
                    })
                    .collect()
            })
            .collect();

        let mut cells = Vec::with_capacity(level.states.len());
        for (s, wa) in level.states.iter().enumerate() {
            let u = wa.occupant;
            let required = match mode {
                Mode::Editing => 0,
                Mode::Addition => geo
                    .window_members(wa)
                    .map(|l| hardest[l])
                    .fold(prefix_hardest[geo.forced(i)].max(hardest[u]), usize::max),
            };
            let degree = inside[u][m];
            let mut row = vec![None; m + 1];
            for (v, slot) in row.iter_mut().enumerate() {
                if v < required {
                    continue;
                }
                let local = match mode {
                    Mode::Editing => degree + v as u64 - 2 * inside[u][v],
                    Mode::Addition => v as u64 - inside[u][v],
                };
                if i == 1 {
                    *slot = Some((local, None));
                    continue;
                }
                let mut best: Option<(Best, usize)> = None;
                for &p in &level.preds[s] {
                    if let Some(b) = prefmin[p][v] {
                        if best.is_none_or(|(cur, _)| b < cur) {
                            best = Some((b, p));
                        }
                    }
                }
                if let Some(((c, _, pv, _), p)) = best {
                    *slot = Some((c + local, Some((p, pv))));
                }
            }
            cells.push(row);
        }

        for (s, row) in cells.iter().enumerate() {
            let wa = level.states[s];
            for (v, cell) in row.iter().enumerate() {
                if let Some((cost, parent)) = cell {
                    let parent = parent.map(|(p, pv)| DpStateKey {
                        position: i - 1,
                        window: prev_level.states[p],
                        frontier_question: pv,
                        question_window: None,
                    });
                    table.insert(
                        DpStateKey {
                            position: i,
                            window: wa,
                            frontier_question: v,
                            question_window: None,
                        },
                        DpEntry { cost: *cost, parent },
                    );
                }
            }
        }
        prev_cells = cells;
    }
    Ok(table)
}
