//! 3-SAT to unconstrained 1-near editing.
//!
//! Every variable gets six students `a, b, f, t, c, d`, listed strongest
//! first. Blocks of gadget questions pin every adjacent pair of the base
//! order except `f, t`, so a cheap solution may only swap `f` and `t` inside
//! groups; whether `t` ends up above `f` is the variable's truth value. One
//! clause question per clause can be fixed with `3n - 1` edits exactly when
//! one of its literals holds.

use std::fmt;
use std::ops::RangeInclusive;

use fixedbitset::FixedBitSet;

use crate::error::{ChainError, Result};
use crate::model::{EditSet, Instance, Mode, Permutation, ProblemSpec, Solution, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "-{}", self.var)
        }
    }
}

pub type Clause = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl Formula {
    /// Checks ranges, width and tautologies, and sorts each clause. Errors
    /// report the 1-based clause number as the line.
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Formula> {
        let mut out = Vec::with_capacity(clauses.len());
        for (idx, mut clause) in clauses.into_iter().enumerate() {
            clause.sort();
            clause.dedup();
            if let Some(l) = clause.iter().find(|l| l.var == 0 || l.var > num_vars) {
                return Err(ChainError::Parse {
                    line: idx + 1,
                    message: format!("variable {} outside 1..={num_vars}", l.var),
                });
            }
            if let Some(w) = clause.windows(2).find(|w| w[0].var == w[1].var) {
                return Err(ChainError::TautologicalClause {
                    line: idx + 1,
                    var: w[0].var,
                });
            }
            if clause.len() > 3 {
                return Err(ChainError::ClauseTooWide {
                    line: idx + 1,
                    width: clause.len(),
                });
            }
            out.push(clause);
        }
        Ok(Formula {
            num_vars,
            clauses: out,
        })
    }

    /// Index of the first clause `assignment` falsifies.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.holds(assignment)))
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.first_unsatisfied(assignment).is_none()
    }

    /// Truth-table search; only sensible for a handful of variables.
    pub fn brute_force_solve(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars < 32, "truth table too large");
        (0u64..1 << self.num_vars)
            .map(|bits| (0..self.num_vars).map(|v| bits >> v & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.is_satisfied_by(a))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Reads DIMACS CNF. The `p cnf` header is optional; without it the
/// variable count is the largest index seen.
pub fn parse_cnf(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<(usize, Clause)> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut current_line = 0;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        last_line = line_no;
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || ChainError::Parse {
                line: line_no,
                message: format!("malformed header `{line}`"),
            };
            if header.is_some() || !clauses.is_empty() || !current.is_empty() {
                return Err(ChainError::Parse {
                    line: line_no,
                    message: "header must come before any clause".into(),
                });
            }
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad());
            }
            let v = parts[2].parse().map_err(|_| bad())?;
            let c = parts[3].parse().map_err(|_| bad())?;
            header = Some((v, c, line_no));
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| ChainError::Parse {
                line: line_no,
                message: format!("`{tok}` is not an integer literal"),
            })?;
            if current.is_empty() {
                current_line = line_no;
            }
            if lit == 0 {
                clauses.push((current_line, std::mem::take(&mut current)));
                continue;
            }
            current.push(Literal {
                var: lit.unsigned_abs() as usize,
                positive: lit > 0,
            });
        }
    }
    if !current.is_empty() {
        clauses.push((current_line, current));
    }

    let max_var = clauses
        .iter()
        .flat_map(|(_, c)| c.iter().map(|l| l.var))
        .max()
        .unwrap_or(0);
    let num_vars = match header {
        Some((v, c, line)) => {
            if max_var > v {
                return Err(ChainError::Parse {
                    line,
                    message: format!("header declares {v} variables but variable {max_var} occurs"),
                });
            }
            if c != clauses.len() {
                return Err(ChainError::Parse {
                    line: last_line.max(line),
                    message: format!("header declares {c} clauses, found {}", clauses.len()),
                });
            }
            v
        }
        None => max_var,
    };

    let mut out = Vec::with_capacity(clauses.len());
    for (line, mut clause) in clauses {
        clause.sort();
        clause.dedup();
        if let Some(w) = clause.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(ChainError::TautologicalClause { line, var: w[0].var });
        }
        if clause.len() > 3 {
            return Err(ChainError::ClauseTooWide {
                line,
                width: clause.len(),
            });
        }
        out.push(clause);
    }
    Formula::new(num_vars, out)
}

/// The six students of a variable group, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    A,
    B,
    F,
    T,
    C,
    D,
}

impl Role {
    pub const ALL: [Role; 6] = [Role::A, Role::B, Role::F, Role::T, Role::C, Role::D];

    fn offset(self) -> usize {
        self as usize + 1
    }
}

/// Student id of `role` in the group of 1-based variable `var`.
pub fn student_id(var: usize, role: Role) -> usize {
    6 * (var - 1) + role.offset()
}

/// One block of gadget questions keeping `stronger` above `weaker`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetRange {
    pub stronger: usize,
    pub weaker: usize,
    pub questions: RangeInclusive<usize>,
}

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub instance: Instance,
    /// Base student order, weakest first; also stored on `instance`.
    pub pi_phi: Permutation,
    pub t_phi: u64,
    pub k: usize,
    pub clause_question_ids: Vec<usize>,
    pub gadget_ranges: Vec<GadgetRange>,
    pub formula: Formula,
}

impl ReductionInstance {
    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec::new(Variant::UnconstrainedKnear, Mode::Editing, self.k)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReductionOptions {
    /// Questions per gadget block; `None` means `t_phi + 1`.
    pub gadget_multiplicity: Option<usize>,
}

pub fn build_reduction(phi: &Formula) -> Result<ReductionInstance> {
    build_reduction_with(phi, &ReductionOptions::default())
}

pub fn build_reduction_with(phi: &Formula, opts: &ReductionOptions) -> Result<ReductionInstance> {
    let n = phi.num_vars;
    if n == 0 {
        return Err(ChainError::InvalidConfig("formula has no variables".into()));
    }
    let num_students = 6 * n;
    let t_phi = (phi.clauses.len() * (3 * n - 1)) as u64;
    let copies = opts.gadget_multiplicity.unwrap_or(t_phi as usize + 1);
    if copies == 0 {
        return Err(ChainError::InvalidConfig("gadget multiplicity must be positive".into()));
    }

    // weakest first: group n as d, c, t, f, b, a, ..., group 1 last
    let mut order = Vec::with_capacity(num_students);
    for var in (1..=n).rev() {
        for role in Role::ALL.iter().rev() {
            order.push(student_id(var, *role));
        }
    }
    let pi_phi = Permutation::from_order(order)?;

    let mut relations = Vec::new();
    for var in 1..=n {
        for (hi, lo) in [(Role::A, Role::B), (Role::B, Role::F), (Role::T, Role::C), (Role::C, Role::D)] {
            relations.push((student_id(var, hi), student_id(var, lo)));
        }
        if var < n {
            relations.push((student_id(var, Role::D), student_id(var + 1, Role::A)));
        }
    }

    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); num_students + 1];
    let mut next_q = 1;
    let mut gadget_ranges = Vec::with_capacity(relations.len());
    for &(hi, lo) in &relations {
        let first = next_q;
        for _ in 0..copies {
            for pos in pi_phi.position_of(hi)..=num_students {
                rows[pi_phi.at(pos)].push(next_q);
            }
            next_q += 1;
        }
        gadget_ranges.push(GadgetRange {
            stronger: hi,
            weaker: lo,
            questions: first..=next_q - 1,
        });
    }

    let mut clause_question_ids = Vec::with_capacity(phi.clauses.len());
    for clause in &phi.clauses {
        for var in 1..=n {
            let third = match clause.iter().find(|l| l.var == var) {
                Some(l) if l.positive => Role::T,
                Some(_) => Role::F,
                None => Role::C,
            };
            for role in [Role::B, Role::D, third] {
                rows[student_id(var, role)].push(next_q);
            }
        }
        clause_question_ids.push(next_q);
        next_q += 1;
    }

    let instance = Instance::from_rows(next_q - 1, &rows[1..])?.with_base_orders(Some(pi_phi.clone()), None)?;
    Ok(ReductionInstance {
        instance,
        pi_phi,
        t_phi,
        k: 1,
        clause_question_ids,
        gadget_ranges,
        formula: phi.clone(),
    })
}

/// Turns a satisfying assignment into an editing of cost exactly `t_phi`.
pub fn assignment_to_editing(red: &ReductionInstance, assignment: &[bool]) -> Result<Solution> {
    let phi = &red.formula;
    let n = phi.num_vars;
    if assignment.len() != n {
        return Err(ChainError::InvalidConfig(format!(
            "assignment has {} values for {n} variables",
            assignment.len()
        )));
    }
    if let Some(c) = phi.first_unsatisfied(assignment) {
        return Err(ChainError::Unsatisfied(c + 1));
    }

    let mut order = red.pi_phi.order().to_vec();
    for var in (1..=n).filter(|&v| assignment[v - 1]) {
        let pf = red.pi_phi.position_of(student_id(var, Role::F));
        let pt = red.pi_phi.position_of(student_id(var, Role::T));
        order.swap(pf - 1, pt - 1);
    }
    let student_order = Permutation::from_order(order)?;
    let num_students = red.instance.num_students();
    let m = red.instance.num_questions();

    let mut edits = EditSet::default();
    for (clause, &q) in phi.clauses.iter().zip(&red.clause_question_ids) {
        let lit = clause.iter().find(|l| l.holds(assignment)).expect("clause is satisfied");
        let pivot = student_id(lit.var, if lit.positive { Role::T } else { Role::F });
        for pos in 1..=num_students {
            let s = student_order.at(pos);
            let want = pos >= student_order.position_of(pivot);
            match (want, red.instance.has_edge(s, q)) {
                (true, false) => {
                    edits.additions.insert((s, q));
                }
                (false, true) => {
                    edits.deletions.insert((s, q));
                }
                _ => {}
            }
        }
    }
    let cost = edits.len() as u64;
    if cost != red.t_phi {
        return Err(ChainError::Internal(format!(
            "forward construction cost {cost}, expected {}",
            red.t_phi
        )));
    }

    // questions ordered by how many students keep them, most first
    let mut size = vec![0usize; m + 1];
    for s in 1..=num_students {
        for q in red.instance.neighbors(s).ones() {
            if !edits.deletions.contains(&(s, q)) {
                size[q] += 1;
            }
        }
    }
    for &(_, q) in &edits.additions {
        size[q] += 1;
    }
    let mut questions: Vec<usize> = (1..=m).collect();
    questions.sort_by_key(|&q| (std::cmp::Reverse(size[q]), q));

    if student_order.max_displacement(&red.pi_phi) > red.k {
        return Err(ChainError::Internal("forward construction left the 1-near range".into()));
    }
    check_nested(red, &student_order, &edits)?;

    Ok(Solution {
        cost,
        student_order,
        question_order: Permutation::from_order(questions)?,
        edits,
        solver_tag: "hardness.from-assignment".into(),
    })
}

fn check_nested(red: &ReductionInstance, order: &Permutation, edits: &EditSet) -> Result<()> {
    let m = red.instance.num_questions();
    let mut prev: Option<FixedBitSet> = None;
    for pos in 1..=order.len() {
        let s = order.at(pos);
        let mut nb = red.instance.neighbors(s).clone();
        for q in 1..=m {
            if edits.additions.contains(&(s, q)) {
                nb.insert(q);
            }
            if edits.deletions.contains(&(s, q)) {
                nb.set(q, false);
            }
        }
        if let Some(p) = &prev {
            if !p.is_subset(&nb) {
                return Err(ChainError::Internal(format!(
                    "forward construction is not nested at student {s}"
                )));
            }
        }
        prev = Some(nb);
    }
    Ok(())
}

/// Reads the assignment off an editing within budget: a variable is true
/// exactly when its `t` student sits above its `f` student.
pub fn editing_to_assignment(red: &ReductionInstance, sol: &Solution) -> Result<Vec<bool>> {
    if sol.cost > red.t_phi {
        return Err(ChainError::NotWithinBudget {
            cost: sol.cost,
            budget: red.t_phi,
        });
    }
    let pos = |s| sol.student_order.position_of(s);
    let assignment: Vec<bool> = (1..=red.formula.num_vars)
        .map(|v| pos(student_id(v, Role::T)) > pos(student_id(v, Role::F)))
        .collect();
    if let Some(c) = red.formula.first_unsatisfied(&assignment) {
        return Err(ChainError::Internal(format!(
            "editing within budget decodes to an assignment falsifying clause {}",
            c + 1
        )));
    }
    Ok(assignment)
}
