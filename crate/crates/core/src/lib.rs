//! Exact solvers for chain editing on bipartite student/question graphs.
//!
//! A graph is a chain graph when the students can be ordered so that every
//! stronger student's neighborhood contains every weaker one's. The crate
//! computes minimum edge editings (or additions) that reach such a graph
//! when the output orders must stay within `k` positions of given base
//! orders, plus brute-force oracles and a 3-SAT reduction for the hard case.

pub mod cli;
pub mod dp;
pub mod error;
pub mod gen;
pub mod hardness;
pub mod ideal;
pub mod io;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod verify;

pub use error::{ChainError, Result};
pub use ideal::{derive_question_order, recognize_ideal, solve_fixed_side, NestingCertificate, Recognition};
pub use model::{
    apply_edits, validate_instance, EditSet, Instance, InstanceData, Mode, Permutation, ProblemSpec, Side, Solution,
    Variant,
};
pub use oracle::{oracle_solve, oracle_solve_with, solve_unconstrained_knear_editing_exact};
pub use solver::solve;
pub use verify::{verify_solution, Check, VerificationReport};
