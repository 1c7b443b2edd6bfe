use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("edge ({student}, {question}) is out of range for a {num_students}x{num_questions} instance")]
    OutOfRangeEdge {
        student: usize,
        question: usize,
        num_students: usize,
        num_questions: usize,
    },
    #[error("edge ({student}, {question}) is listed more than once")]
    DuplicateEdge { student: usize, question: usize },
    #[error("{what} is not a permutation: {reason}")]
    NotAPermutation { what: &'static str, reason: String },
    #[error("instance must have at least one student and one question")]
    EmptySide,
    #[error("edit conflict at ({student}, {question}): {reason}")]
    EditConflict {
        student: usize,
        question: usize,
        reason: &'static str,
    },
    #[error("student neighborhoods are not nested along the given order (positions {lower} and {upper})")]
    NotNested { lower: usize, upper: usize },
    #[error("instance is not ideal: students {0} and {1} have incomparable neighborhoods")]
    NotIdeal(usize, usize),
    #[error("missing base {0} order required by this problem variant")]
    MissingBaseOrder(&'static str),
    #[error("no feasible solution: {0}")]
    Infeasible(String),
    #[error("displacement bound k={k} gives a window of {width} entities; at most 64 are supported")]
    WindowTooWide { k: usize, width: usize },
    #[error("corrupt DP table: {0}")]
    CorruptTable(String),
    #[error("instance too large for exhaustive search: more than {cap} orderings")]
    InstanceTooLarge { cap: u64 },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("clause at line {line} has {width} literals; at most 3 are allowed")]
    ClauseTooWide { line: usize, width: usize },
    #[error("clause at line {line} contains both x{var} and -x{var}")]
    TautologicalClause { line: usize, var: usize },
    #[error("assignment leaves clause {0} unsatisfied")]
    Unsatisfied(usize),
    #[error("solution cost {cost} exceeds the budget {budget}")]
    NotWithinBudget { cost: u64, budget: u64 },
    #[error("cannot apply {requested} flips: only {available} eligible pairs")]
    NotEnoughPairs { requested: usize, available: usize },
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ChainError {
    fn from(e: std::io::Error) -> Self {
        ChainError::Io(e.to_string())
    }
}

pub type Result<T, E = ChainError> = std::result::Result<T, E>;
