//! Domain types shared by every solver: permutations, instances, edit sets,
//! problem specifications and solutions.
//!
//! Students and questions are 1-indexed. Position 1 of a student ordering is
//! the weakest student; position 1 of a question ordering is the easiest
//! question.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{ChainError, Result};

/// A bijection between positions `1..=n` and entities `1..=n`, stored in both
/// directions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // at[p] = entity at position p; at[0] = 0
    at: Vec<usize>,
    // pos[e] = position of entity e; pos[0] = 0
    pos: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let at: Vec<usize> = (0..=n).collect();
        Permutation { pos: at.clone(), at }
    }

    /// Builds a permutation from the list of entities in position order
    /// (entity at position 1 first).
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        Self::from_order_named(order, "ordering")
    }

    pub(crate) fn from_order_named(order: Vec<usize>, what: &'static str) -> Result<Self> {
        let n = order.len();
        let mut pos = vec![0usize; n + 1];
        for (idx, &e) in order.iter().enumerate() {
            if e == 0 || e > n {
                return Err(ChainError::NotAPermutation {
                    what,
                    reason: format!("entry {e} outside 1..={n}"),
                });
            }
            if pos[e] != 0 {
                return Err(ChainError::NotAPermutation {
                    what,
                    reason: format!("entity {e} appears twice"),
                });
            }
            pos[e] = idx + 1;
        }
        let mut at = Vec::with_capacity(n + 1);
        at.push(0);
        at.extend(order);
        Ok(Permutation { at, pos })
    }

    pub fn len(&self) -> usize {
        self.at.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entity at 1-based `position`.
    #[inline]
    pub fn at(&self, position: usize) -> usize {
        self.at[position]
    }

    /// 1-based position of `entity`.
    #[inline]
    pub fn position_of(&self, entity: usize) -> usize {
        self.pos[entity]
    }

    /// Entities in position order.
    pub fn order(&self) -> &[usize] {
        &self.at[1..]
    }

    pub fn reversed(&self) -> Permutation {
        let order: Vec<usize> = self.order().iter().rev().copied().collect();
        Permutation::from_order(order).expect("reversal of a permutation")
    }

    /// Largest `|self(x) - base(x)|` over all entities.
    pub fn max_displacement(&self, base: &Permutation) -> usize {
        assert_eq!(self.len(), base.len());
        (1..=self.len())
            .map(|e| self.pos[e].abs_diff(base.pos[e]))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.order()).finish()
    }
}

/// Unvalidated instance description, as read from a file or built by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceData {
    pub num_students: usize,
    pub num_questions: usize,
    /// `(student, question)` pairs; an edge means the student answered the
    /// question correctly.
    pub edges: Vec<(usize, usize)>,
    pub base_student_order: Option<Vec<usize>>,
    pub base_question_order: Option<Vec<usize>>,
}

/// A validated bipartite student/question graph with optional base orders.
///
/// Adjacency is one bitset per student, indexed by question id (bit 0 unused).
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    num_students: usize,
    num_questions: usize,
    adjacency: Vec<FixedBitSet>,
    base_student_order: Option<Permutation>,
    base_question_order: Option<Permutation>,
}

/// Checks every instance invariant and returns the canonical instance.
pub fn validate_instance(data: InstanceData) -> Result<Instance> {
    let InstanceData {
        num_students: n,
        num_questions: m,
        edges,
        base_student_order,
        base_question_order,
    } = data;
    if n == 0 || m == 0 {
        return Err(ChainError::EmptySide);
    }
    let mut adjacency = vec![FixedBitSet::with_capacity(m + 1); n + 1];
    for (s, q) in edges {
        if s == 0 || s > n || q == 0 || q > m {
            return Err(ChainError::OutOfRangeEdge {
                student: s,
                question: q,
                num_students: n,
                num_questions: m,
            });
        }
        if adjacency[s].put(q) {
            return Err(ChainError::DuplicateEdge {
                student: s,
                question: q,
            });
        }
    }
    let base_student_order = base_student_order
        .map(|o| check_order(o, n, "base student order"))
        .transpose()?;
    let base_question_order = base_question_order
        .map(|o| check_order(o, m, "base question order"))
        .transpose()?;
    Ok(Instance {
        num_students: n,
        num_questions: m,
        adjacency,
        base_student_order,
        base_question_order,
    })
}

fn check_order(order: Vec<usize>, n: usize, what: &'static str) -> Result<Permutation> {
    if order.len() != n {
        return Err(ChainError::NotAPermutation {
            what,
            reason: format!("expected {n} entries, found {}", order.len()),
        });
    }
    Permutation::from_order_named(order, what)
}

impl Instance {
    /// Builds an instance from per-student neighbor lists (1-indexed; entry 0
    /// of `rows` is student 1).
    pub fn from_rows(num_questions: usize, rows: &[Vec<usize>]) -> Result<Instance> {
        let edges = rows
            .iter()
            .enumerate()
            .flat_map(|(i, qs)| qs.iter().map(move |&q| (i + 1, q)))
            .collect();
        validate_instance(InstanceData {
            num_students: rows.len(),
            num_questions,
            edges,
            ..Default::default()
        })
    }

    pub fn num_students(&self) -> usize {
        self.num_students
    }

    pub fn num_questions(&self) -> usize {
        self.num_questions
    }

    /// Neighborhood of `student` as a bitset over question ids.
    pub fn neighbors(&self, student: usize) -> &FixedBitSet {
        &self.adjacency[student]
    }

    pub fn has_edge(&self, student: usize, question: usize) -> bool {
        self.adjacency[student].contains(question)
    }

    pub fn degree(&self, student: usize) -> usize {
        self.adjacency[student].count_ones(..)
    }

    pub fn num_edges(&self) -> usize {
        (1..=self.num_students).map(|s| self.degree(s)).sum()
    }

    /// All edges in `(student, question)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.num_students).flat_map(move |s| self.adjacency[s].ones().map(move |q| (s, q)))
    }

    /// Students that answered `question`, as a bitset over student ids.
    pub fn question_neighbors(&self, question: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.num_students + 1);
        for s in 1..=self.num_students {
            if self.adjacency[s].contains(question) {
                set.insert(s);
            }
        }
        set
    }

    pub fn base_student_order(&self) -> Option<&Permutation> {
        self.base_student_order.as_ref()
    }

    pub fn base_question_order(&self) -> Option<&Permutation> {
        self.base_question_order.as_ref()
    }

    pub fn require_student_order(&self) -> Result<&Permutation> {
        self.base_student_order
            .as_ref()
            .ok_or(ChainError::MissingBaseOrder("student"))
    }

    pub fn require_question_order(&self) -> Result<&Permutation> {
        self.base_question_order
            .as_ref()
            .ok_or(ChainError::MissingBaseOrder("question"))
    }

    pub fn with_base_orders(
        mut self,
        students: Option<Permutation>,
        questions: Option<Permutation>,
    ) -> Result<Instance> {
        if let Some(p) = &students {
            if p.len() != self.num_students {
                return Err(ChainError::NotAPermutation {
                    what: "base student order",
                    reason: format!("expected {} entries, found {}", self.num_students, p.len()),
                });
            }
        }
        if let Some(p) = &questions {
            if p.len() != self.num_questions {
                return Err(ChainError::NotAPermutation {
                    what: "base question order",
                    reason: format!("expected {} entries, found {}", self.num_questions, p.len()),
                });
            }
        }
        self.base_student_order = students;
        self.base_question_order = questions;
        Ok(self)
    }

    pub fn to_data(&self) -> InstanceData {
        InstanceData {
            num_students: self.num_students,
            num_questions: self.num_questions,
            edges: self.edges().collect(),
            base_student_order: self.base_student_order.as_ref().map(|p| p.order().to_vec()),
            base_question_order: self.base_question_order.as_ref().map(|p| p.order().to_vec()),
        }
    }

    /// Swaps the roles of students and questions. Base orders are reversed so
    /// that "weakest first" and "easiest first" keep their meaning: the
    /// hardest question becomes the weakest student and vice versa.
    pub fn transpose(&self) -> Instance {
        let edges = self.edges().map(|(s, q)| (q, s)).collect();
        validate_instance(InstanceData {
            num_students: self.num_questions,
            num_questions: self.num_students,
            edges,
            base_student_order: self
                .base_question_order
                .as_ref()
                .map(|p| p.reversed().order().to_vec()),
            base_question_order: self
                .base_student_order
                .as_ref()
                .map(|p| p.reversed().order().to_vec()),
        })
        .expect("transpose of a valid instance")
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.num_students)
            .map(|s| {
                (1..=self.num_questions)
                    .map(|q| if self.has_edge(s, q) { '1' } else { '0' })
                    .collect()
            })
            .collect();
        f.debug_struct("Instance")
            .field("rows", &rows)
            .field("base_student_order", &self.base_student_order)
            .field("base_question_order", &self.base_question_order)
            .finish()
    }
}

/// Disjoint sets of edge additions and deletions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditSet {
    pub additions: BTreeSet<(usize, usize)>,
    pub deletions: BTreeSet<(usize, usize)>,
}

impl EditSet {
    pub fn len(&self) -> usize {
        self.additions.len() + self.deletions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The edit set that undoes this one.
    pub fn reversed(&self) -> EditSet {
        EditSet {
            additions: self.deletions.clone(),
            deletions: self.additions.clone(),
        }
    }

    /// Edits turning `current` into `target` for one student.
    pub(crate) fn record_student(
        &mut self,
        student: usize,
        current: &FixedBitSet,
        target: &FixedBitSet,
    ) {
        for q in target.difference(current) {
            self.additions.insert((student, q));
        }
        for q in current.difference(target) {
            self.deletions.insert((student, q));
        }
    }
}

/// Applies `edits`, returning `E' = (E ∪ additions) \ deletions`.
pub fn apply_edits(inst: &Instance, edits: &EditSet) -> Result<Instance> {
    let mut out = inst.clone();
    let in_range = |s: usize, q: usize| s >= 1 && s <= inst.num_students && q >= 1 && q <= inst.num_questions;
    for &(s, q) in &edits.additions {
        if !in_range(s, q) {
            return Err(ChainError::EditConflict {
                student: s,
                question: q,
                reason: "addition out of range",
            });
        }
        if edits.deletions.contains(&(s, q)) {
            return Err(ChainError::EditConflict {
                student: s,
                question: q,
                reason: "pair is both added and deleted",
            });
        }
        if out.adjacency[s].put(q) {
            return Err(ChainError::EditConflict {
                student: s,
                question: q,
                reason: "added edge already exists",
            });
        }
    }
    for &(s, q) in &edits.deletions {
        if !in_range(s, q) || !inst.adjacency[s].contains(q) {
            return Err(ChainError::EditConflict {
                student: s,
                question: q,
                reason: "deleted edge is absent",
            });
        }
        out.adjacency[s].set(q, false);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Editing,
    Addition,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Editing => "editing",
            Mode::Addition => "addition",
        }
    }

    pub fn from_name(name: &str) -> Option<Mode> {
        [Mode::Editing, Mode::Addition].into_iter().find(|m| m.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    StudentsFixed,
    QuestionsFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Ideal mutual orderings: no edits allowed.
    ImoRecognize,
    /// Both base orders must be kept exactly; no edits allowed.
    FixedBothCheck,
    /// One side is kept at its base order, the other side is free.
    FixedOneSide(Side),
    /// Students k-near their base order, questions exactly at theirs.
    ConstrainedKnear,
    /// Students k-near their base order, questions free.
    UnconstrainedKnear,
    /// Both sides k-near their base orders.
    BothKnear,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::ImoRecognize,
        Variant::FixedBothCheck,
        Variant::FixedOneSide(Side::StudentsFixed),
        Variant::FixedOneSide(Side::QuestionsFixed),
        Variant::ConstrainedKnear,
        Variant::UnconstrainedKnear,
        Variant::BothKnear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::ImoRecognize => "imo",
            Variant::FixedBothCheck => "fixed-both",
            Variant::FixedOneSide(Side::StudentsFixed) => "fixed-students",
            Variant::FixedOneSide(Side::QuestionsFixed) => "fixed-questions",
            Variant::ConstrainedKnear => "constrained",
            Variant::UnconstrainedKnear => "unconstrained",
            Variant::BothKnear => "both",
        }
    }

    pub fn from_name(name: &str) -> Option<Variant> {
        Variant::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// Which problem to solve: the variant, edit mode and displacement bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub variant: Variant,
    pub mode: Mode,
    pub k: usize,
}

impl ProblemSpec {
    pub fn new(variant: Variant, mode: Mode, k: usize) -> Self {
        ProblemSpec { variant, mode, k }
    }

    pub fn students_knear(&self) -> bool {
        matches!(
            self.variant,
            Variant::ConstrainedKnear | Variant::UnconstrainedKnear | Variant::BothKnear
        )
    }

    pub fn questions_knear(&self) -> bool {
        self.variant == Variant::BothKnear
    }

    pub fn students_fixed(&self) -> bool {
        matches!(
            self.variant,
            Variant::FixedBothCheck | Variant::FixedOneSide(Side::StudentsFixed)
        )
    }

    pub fn questions_fixed(&self) -> bool {
        matches!(
            self.variant,
            Variant::FixedBothCheck
                | Variant::FixedOneSide(Side::QuestionsFixed)
                | Variant::ConstrainedKnear
        )
    }

    pub fn allows_edits(&self) -> bool {
        !matches!(self.variant, Variant::ImoRecognize | Variant::FixedBothCheck)
    }

    /// Checks that `inst` carries the base orders this spec needs.
    pub fn check_instance(&self, inst: &Instance) -> Result<()> {
        if self.students_knear() || self.students_fixed() {
            inst.require_student_order()?;
        }
        if self.questions_knear() || self.questions_fixed() {
            inst.require_question_order()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub cost: u64,
    /// Weakest student first.
    pub student_order: Permutation,
    /// Easiest question first.
    pub question_order: Permutation,
    pub edits: EditSet,
    pub solver_tag: String,
}
