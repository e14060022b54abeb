//! Multi-objective branch and bound with adaptive node selection,
//! scalarization-based bound improvement and simple lower bounds.

mod config;
mod node;
mod rules;
mod solver;
mod stats;

pub use config::{default_measure, Approach, ApproachBase, Branching, NodeSelection, SolverConfig};
pub use node::{Node, NodeQueue};
pub use rules::{
    choose_branch_variable, level_cut, most_often_fractional, prune_redundant_cuts, round_cut,
    slb_weight, sum_of_ratios,
};
pub use solver::{solve, SolveOutput, StoredCut};
pub use stats::{FathomCause, SolveStats, TraceEvent};
