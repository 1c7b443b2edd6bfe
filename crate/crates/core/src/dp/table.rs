use std::cmp::Ordering;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::window::{WindowAssignment, WindowGeometry};
use crate::error::{ChainError, Result};
use crate::ideal::derive_question_order;
use crate::model::{apply_edits, EditSet, Instance, Mode, Permutation, Solution};

/// Which program filled a table; decides how keys translate into edits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpKind {
    Constrained(Mode),
    UnconstrainedAddition,
    Both(Mode),
}

/// One subproblem. All entities are base labels (base positions).
///
/// `frontier_question` is the hardest question answered by the students up
/// to `position` (0 when none). For the both-near program it is the question
/// at position `question_window.center` and `question_window` carries the set
/// of easier questions; `None` there means the empty prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DpStateKey {
    pub position: usize,
    pub window: WindowAssignment,
    pub frontier_question: usize,
    pub question_window: Option<WindowAssignment>,
}

impl DpStateKey {
    fn tie_key(&self) -> (usize, usize, usize, u64, u64, usize) {
        let (j, qmask) = self
            .question_window
            .map_or((0, 0), |q| (q.center, q.prefix_mask));
        (
            self.window.occupant,
            j,
            self.frontier_question,
            self.window.prefix_mask,
            qmask,
            self.position,
        )
    }
}

impl PartialOrd for DpStateKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic by occupant, then frontier, then the masks.
impl Ord for DpStateKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tie_key().cmp(&other.tie_key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpEntry {
    pub cost: u64,
    pub parent: Option<DpStateKey>,
}

/// Optimal cost and best parent per subproblem.
#[derive(Debug, Clone)]
pub struct DpTable {
    pub kind: DpKind,
    pub k: usize,
    entries: HashMap<DpStateKey, DpEntry>,
}

impl DpTable {
    pub fn new(kind: DpKind, k: usize) -> Self {
        DpTable {
            kind,
            k,
            entries: HashMap::new(),
        }
    }

    pub fn insert(&mut self, key: DpStateKey, entry: DpEntry) {
        self.entries.insert(key, entry);
    }

    pub fn get(&self, key: &DpStateKey) -> Option<&DpEntry> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cheapest state at the last position, smallest key among ties.
    pub fn best_terminal(&self, last_position: usize) -> Option<DpStateKey> {
        self.entries
            .iter()
            .filter(|(k, _)| k.position == last_position)
            .min_by(|(ka, ea), (kb, eb)| ea.cost.cmp(&eb.cost).then_with(|| ka.cmp(kb)))
            .map(|(k, _)| *k)
    }
}

/// Follows parent pointers from `terminal` and rebuilds the full solution:
/// the student order, the per-student edits and the question order.
pub fn reconstruct(table: &DpTable, terminal: &DpStateKey, inst: &Instance) -> Result<Solution> {
    let n = inst.num_students();
    let m = inst.num_questions();
    let alpha = inst.require_student_order()?;
    let student_geo = WindowGeometry::new(n, table.k)?;
    let question_geo = match table.kind {
        DpKind::Both(_) => Some(WindowGeometry::new(m, table.k)?),
        _ => None,
    };

    let mut chain = Vec::with_capacity(n);
    let mut cursor = Some(*terminal);
    while let Some(key) = cursor {
        let entry = table
            .get(&key)
            .ok_or_else(|| ChainError::CorruptTable(format!("no entry for {key:?}")))?;
        chain.push(key);
        cursor = entry.parent;
        if chain.len() > n {
            return Err(ChainError::CorruptTable("parent chain longer than the student count".into()));
        }
    }
    chain.reverse();
    if chain.len() != n || chain.iter().enumerate().any(|(idx, k)| k.position != idx + 1) {
        return Err(ChainError::CorruptTable(format!(
            "parent chain covers positions {:?}, expected 1..={n}",
            chain.iter().map(|k| k.position).collect::<Vec<_>>()
        )));
    }

    let occupants: Vec<usize> = chain.iter().map(|k| alpha.at(k.window.occupant)).collect();
    let student_order = Permutation::from_order(occupants)
        .map_err(|e| ChainError::CorruptTable(format!("occupants do not form a permutation: {e}")))?;

    let beta = match table.kind {
        DpKind::UnconstrainedAddition => None,
        _ => Some(inst.require_question_order()?),
    };

    let mut edits = EditSet::default();
    for key in &chain {
        let student = alpha.at(key.window.occupant);
        let mut target = FixedBitSet::with_capacity(m + 1);
        match table.kind {
            DpKind::Constrained(_) => {
                let beta = beta.expect("question order present");
                for p in 1..=key.frontier_question {
                    target.insert(beta.at(p));
                }
            }
            DpKind::UnconstrainedAddition => {
                target.union_with(inst.neighbors(student));
                for label in student_geo.prefix_members(&key.window) {
                    target.union_with(inst.neighbors(alpha.at(label)));
                }
            }
            DpKind::Both(_) => {
                let beta = beta.expect("question order present");
                if let Some(qw) = &key.question_window {
                    let geo = question_geo.as_ref().expect("question geometry present");
                    target.insert(beta.at(qw.occupant));
                    for label in geo.prefix_members(qw) {
                        target.insert(beta.at(label));
                    }
                }
            }
        }
        edits.record_student(student, inst.neighbors(student), &target);
    }

    let cost = edits.len() as u64;
    let table_cost = table.get(terminal).map(|e| e.cost).unwrap_or(u64::MAX);
    if cost != table_cost {
        return Err(ChainError::CorruptTable(format!(
            "reconstructed cost {cost} differs from table cost {table_cost}"
        )));
    }
    let mode = match table.kind {
        DpKind::Constrained(mode) | DpKind::Both(mode) => mode,
        DpKind::UnconstrainedAddition => Mode::Addition,
    };
    if mode == Mode::Addition && !edits.deletions.is_empty() {
        return Err(ChainError::CorruptTable("addition program produced deletions".into()));
    }

    let (question_order, solver_tag) = match table.kind {
        DpKind::Constrained(mode) => (
            beta.expect("question order present").clone(),
            format!("dp.constrained.{}", mode.name()),
        ),
        DpKind::UnconstrainedAddition => {
            let edited = apply_edits(inst, &edits)?;
            (
                derive_question_order(&edited, &student_order)
                    .map_err(|e| ChainError::CorruptTable(format!("edited graph is not nested: {e}")))?,
                "dp.unconstrained.addition".to_string(),
            )
        }
        DpKind::Both(mode) => (
            question_order_from_chain(&chain, question_geo.as_ref().expect("question geometry present"), beta.expect("question order present"))?,
            format!("dp.both.{}", mode.name()),
        ),
    };

    Ok(Solution {
        cost,
        student_order,
        question_order,
        edits,
        solver_tag,
    })
}

/// Lays the question prefixes seen along the chain out as one order: each
/// new block of labels goes in ascending order, followed by the block's
/// pinned question; labels never reached come last.
fn question_order_from_chain(chain: &[DpStateKey], geo: &WindowGeometry, beta: &Permutation) -> Result<Permutation> {
    let m = geo.n;
    let mut placed = vec![false; m + 1];
    let mut labels = Vec::with_capacity(m);
    let mut last_center = 0;
    for qw in chain.iter().filter_map(|k| k.question_window) {
        if qw.center == last_center {
            continue;
        }
        if qw.center < last_center {
            return Err(ChainError::CorruptTable("question frontier moved backwards".into()));
        }
        for label in geo.prefix_members(&qw) {
            if !placed[label] {
                placed[label] = true;
                labels.push(label);
            }
        }
        if placed[qw.occupant] || labels.len() + 1 != qw.center {
            return Err(ChainError::CorruptTable(format!(
                "question prefix at position {} is inconsistent with earlier prefixes",
                qw.center
            )));
        }
        placed[qw.occupant] = true;
        labels.push(qw.occupant);
        last_center = qw.center;
    }
    labels.extend((1..=m).filter(|&l| !placed[l]));
    Permutation::from_order(labels.into_iter().map(|l| beta.at(l)).collect())
        .map_err(|e| ChainError::CorruptTable(format!("question order: {e}")))
}
