//! Both sides k-near their base orders.
//!
//! On top of the student window, a subproblem records the frontier position
//! `j`, the question `v` at position `j` and the set `V` of the `j - 1`
//! easier questions (itself a question-side window assignment). The occupant's
//! neighborhood becomes `V ∪ {v}`. Consecutive students either share the
//! same question state or the stronger one's `V` contains the weaker one's
//! whole prefix, which keeps every prefix consistent with one question order.

use fixedbitset::FixedBitSet;

use super::lattice::Lattice;
use super::table::{reconstruct, DpEntry, DpKind, DpStateKey, DpTable};
use super::window::WindowAssignment;
use super::DpOptions;
use crate::error::{ChainError, Result};
use crate::model::{Instance, Mode, Solution};

pub fn solve_both_knear(inst: &Instance, k: usize, mode: Mode) -> Result<Solution> {
    solve_both_knear_with(inst, k, mode, &DpOptions::default())
}

pub fn solve_both_knear_with(inst: &Instance, k: usize, mode: Mode, opts: &DpOptions) -> Result<Solution> {
    let table = both_table(inst, k, mode, opts)?;
    let terminal = table
        .best_terminal(inst.num_students())
        .ok_or_else(|| ChainError::Internal("both-near program has no terminal state".into()))?;
    reconstruct(&table, &terminal, inst)
}

/// A question-side state; `window == None` is the empty prefix (`j = 0`).
struct QuestionState {
    window: Option<WindowAssignment>,
    /// `V ∪ {v}` over question labels.
    prefix: FixedBitSet,
    /// `V` alone.
    easier: FixedBitSet,
    /// Question states a weaker student may hold.
    compatible: Vec<usize>,
}

impl QuestionState {
    fn position(&self) -> usize {
        self.window.map_or(0, |w| w.center)
    }
}

fn question_states(inst: &Instance, k: usize, opts: &DpOptions) -> Result<Vec<QuestionState>> {
    let m = inst.num_questions();
    let lattice = Lattice::build(m, k, opts.window_method)?;
    let geo = lattice.geo;
    let mut states = vec![QuestionState {
        window: None,
        prefix: FixedBitSet::with_capacity(m + 1),
        easier: FixedBitSet::with_capacity(m + 1),
        compatible: Vec::new(),
    }];
    for j in 1..=m {
        for wa in &lattice.levels[j].states {
            let mut easier = FixedBitSet::with_capacity(m + 1);
            for l in geo.prefix_members(wa) {
                easier.insert(l);
            }
            let mut prefix = easier.clone();
            prefix.insert(wa.occupant);
            states.push(QuestionState {
                window: Some(*wa),
                prefix,
                easier,
                compatible: Vec::new(),
            });
        }
    }
    for q in 0..states.len() {
        let compatible = (0..states.len())
            .filter(|&p| {
                let (a, b) = (&states[p], &states[q]);
                p == 0 || p == q || (a.position() < b.position() && a.prefix.is_subset(&b.easier))
            })
            .collect();
        states[q].compatible = compatible;
    }
    Ok(states)
}

type Tie = (u64, usize, usize, usize, u64, u64);

pub fn both_table(inst: &Instance, k: usize, mode: Mode, opts: &DpOptions) -> Result<DpTable> {
    let alpha = inst.require_student_order()?;
    let beta = inst.require_question_order()?;
    let n = inst.num_students();
    let m = inst.num_questions();
    let lattice = Lattice::build(n, k, opts.window_method)?;
    let geo = lattice.geo;
    let qstates = question_states(inst, k, opts)?;

    // neighborhoods over question labels
    let nb: Vec<FixedBitSet> = (0..=n)
        .map(|l| {
            let mut set = FixedBitSet::with_capacity(m + 1);
            if l > 0 {
                for q in inst.neighbors(alpha.at(l)).ones() {
                    set.insert(beta.position_of(q));
                }
            }
            set
        })
        .collect();
    let mut prefix_union = vec![FixedBitSet::with_capacity(m + 1); n + 1];
    for l in 1..=n {
        let mut u = prefix_union[l - 1].clone();
        u.union_with(&nb[l]);
        prefix_union[l] = u;
    }

    let key_of = |i: usize, wa: WindowAssignment, q: usize| {
        let qs = &qstates[q];
        DpStateKey {
            position: i,
            window: wa,
            frontier_question: qs.window.map_or(0, |w| w.occupant),
            question_window: qs.window,
        }
    };
    let tie_of = |cost: u64, wa: &WindowAssignment, q: usize| -> Tie {
        let qs = &qstates[q];
        let (j, v, qmask) = qs.window.map_or((0, 0, 0), |w| (w.center, w.occupant, w.prefix_mask));
        (cost, wa.occupant, j, v, wa.prefix_mask, qmask)
    };

    let mut table = DpTable::new(DpKind::Both(mode), k);
    let mut prev_cells: Vec<Vec<Option<u64>>> = Vec::new();
    for i in 1..=n {
        let level = &lattice.levels[i];
        let prev_level = &lattice.levels[i - 1];
        let mut cells = Vec::with_capacity(level.states.len());
        for (s, wa) in level.states.iter().enumerate() {
            let own = &nb[wa.occupant];
            let required = (mode == Mode::Addition).then(|| {
                let mut union = prefix_union[geo.forced(i)].clone();
                for l in geo.window_members(wa) {
                    union.union_with(&nb[l]);
                }
                union.union_with(own);
                union
            });
            let mut row = vec![None; qstates.len()];
            for (q, qs) in qstates.iter().enumerate() {
                if let Some(req) = &required {
                    if !req.is_subset(&qs.prefix) {
                        continue;
                    }
                }
                let local = match mode {
                    Mode::Editing => own.symmetric_difference_count(&qs.prefix),
                    Mode::Addition => qs.prefix.difference_count(own),
                } as u64;
                let parent = if i == 1 {
                    None
                } else {
                    let mut best: Option<(Tie, usize, usize)> = None;
                    for &p in &level.preds[s] {
                        let pwa = &prev_level.states[p];
                        for &pq in &qs.compatible {
                            if let Some(c) = prev_cells[p][pq] {
                                let t = tie_of(c, pwa, pq);
                                if best.is_none_or(|(b, _, _)| t < b) {
                                    best = Some((t, p, pq));
                                }
                            }
                        }
                    }
                    match best {
                        Some(b) => Some(b),
                        None => continue,
                    }
                };
                let cost = local + parent.map_or(0, |(t, _, _)| t.0);
                row[q] = Some(cost);
                table.insert(
                    key_of(i, *wa, q),
                    DpEntry {
                        cost,
                        parent: parent.map(|(_, p, pq)| key_of(i - 1, prev_level.states[p], pq)),
                    },
                );
            }
            cells.push(row);
        }
        prev_cells = cells;
    }
    Ok(table)
}
