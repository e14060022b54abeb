//! Multi-objective 0-1 integer linear programming by branch and bound.
//!
//! [`mobb::solve`] enumerates the nondominated set of an [`Instance`];
//! [`instances`] reads, writes and generates benchmark instances, and
//! [`enumerate_nondominated`] is the exhaustive reference.

pub mod bounds;
pub mod clock;
pub mod error;
pub mod instances;
pub mod ipsolve;
pub mod lp;
pub mod mobb;
pub mod model;

pub use bounds::{GapMeasure, IncumbentList, LocalUpperBoundSet, LowerBoundSet};
pub use clock::ClockMode;
pub use error::{Error, Result};
pub use mobb::{solve, Approach, SolveOutput, SolveStats, SolverConfig};
pub use model::{enumerate_nondominated, Fixings, Instance, Sense, Solution};
