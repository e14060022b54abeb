use crate::model::Fixings;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub nodes_explored: usize,
    pub ip_scalarizations: usize,
    /// Seconds on the configured clock, warmstart included.
    pub wall_time: f64,
    pub fathomed_infeasible: usize,
    pub fathomed_optimal: usize,
    pub fathomed_dominance: usize,
    /// Nodes closed by terminal enumeration.
    pub enumerated: usize,
    pub branched: usize,
    pub solved_to_completion: bool,
    /// Seconds spent on the root lower bound.
    pub root_lb_time: f64,
}

impl SolveStats {
    pub fn fathomed_total(&self) -> usize {
        self.fathomed_infeasible + self.fathomed_optimal + self.fathomed_dominance + self.enumerated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FathomCause {
    Infeasible,
    Optimal,
    Dominance,
    Enumerated,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    NodeSelected {
        iteration: usize,
        node: usize,
        depth: usize,
        free: usize,
    },
    Fathomed {
        node: usize,
        fixings: Fixings,
        cause: FathomCause,
    },
    /// The ε-constraint step was due; `performed` is false when the node
    /// offered no surviving local upper bound.
    EcDue {
        iteration: usize,
        performed: bool,
    },
    Slb {
        iteration: usize,
        depth: usize,
    },
    Te {
        iteration: usize,
        free: usize,
    },
    Branched {
        node: usize,
        variable: usize,
        children: [usize; 2],
    },
}
