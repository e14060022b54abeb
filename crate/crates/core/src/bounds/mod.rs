//! Upper bound set, local upper bounds, lower bound sets, fathoming and gap
//! measures.

mod incumbents;
mod lower;
mod lubs;

pub use incumbents::{IncumbentList, IncumbentUpdate};
pub use lower::{
    dominance_fathom, gap_over, hv_box_gap, hv_simplex_gap, is_strictly_above, lub_survives,
    node_gap, spanning_points, to_f64, BoundKind, FathomCheck, GapMeasure, Halfspace,
    LowerBoundSet, ABOVE_TOL,
};
pub(crate) use lower::determinant;
pub use lubs::LocalUpperBoundSet;
