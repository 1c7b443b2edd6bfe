//! Polynomial dynamic programs for the k-near variants, with full solution
//! reconstruction.

mod both;
mod constrained;
mod lattice;
mod table;
mod unconstrained;
pub mod window;

pub use both::{both_table, solve_both_knear, solve_both_knear_with};
pub use constrained::{constrained_table, solve_constrained_knear, solve_constrained_knear_with};
pub use table::{reconstruct, DpEntry, DpKind, DpStateKey, DpTable};
pub use unconstrained::{
    solve_unconstrained_knear_addition, solve_unconstrained_knear_addition_with, unconstrained_addition_table,
};
pub use window::{enumerate_window_sets, enumerate_window_sets_with, WindowAssignment, WindowMethod};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpOptions {
    pub window_method: WindowMethod,
}
