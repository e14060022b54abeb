//! Single-objective 0-1 branch and bound for the scalarized subproblems.
//!
//! Search is best-bound first over LP relaxations, branching on the most
//! fractional variable. When the time limit strikes, the best solution
//! found so far is returned together with the proven bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::bounds::Halfspace;
use crate::clock::{ClockMode, Deadline};
use crate::error::{Error, Result};
use crate::lp::{ObjectiveRow, RelaxedSubproblem};
use crate::model::Fixings;

const INTEGRALITY_TOL: f64 = 1e-6;
const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarStatus {
    Optimal,
    FeasibleTimeout,
    Infeasible,
    NoSolutionTimeout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarResult {
    pub status: ScalarStatus,
    pub solution: Option<Vec<u8>>,
    pub value: Option<f64>,
    /// Proven lower bound on the optimum.
    pub bound: f64,
    /// Number of integer programs solved to produce this result.
    pub ip_solves: usize,
}

impl ScalarResult {
    fn infeasible(ip_solves: usize) -> Self {
        ScalarResult {
            status: ScalarStatus::Infeasible,
            solution: None,
            value: None,
            bound: f64::INFINITY,
            ip_solves,
        }
    }

    pub fn has_solution(&self) -> bool {
        self.solution.is_some()
    }
}

/// Time allowance for one integer program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeLimit {
    pub clock: ClockMode,
    pub secs: Option<f64>,
}

impl TimeLimit {
    pub fn unlimited() -> Self {
        TimeLimit {
            clock: ClockMode::Wall,
            secs: None,
        }
    }

    pub fn new(clock: ClockMode, secs: Option<f64>) -> Self {
        TimeLimit { clock, secs }
    }

    fn start(&self) -> Deadline {
        Deadline::new(self.clock, self.secs)
    }
}

struct Open {
    bound: f64,
    id: usize,
    fixings: Fixings,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Open {
    // Max-heap order: smallest bound first, then newest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.id.cmp(&other.id))
    }
}

fn feasible(sub: &RelaxedSubproblem<'_>, x: &[u8]) -> bool {
    if !sub.instance.feasible_unchecked(x) {
        return false;
    }
    if !sub.cuts.iter().all(|c| c.holds_binary(x)) {
        return false;
    }
    let image = sub.instance.image_unchecked(x);
    sub.objective_rows.iter().all(|row| {
        let lhs: f64 = row.weights.iter().zip(&image).map(|(w, &y)| w * y as f64).sum();
        lhs >= row.rhs - 1e-9 * (1.0 + row.rhs.abs())
    })
}

/// Minimize `c · x` over the integer points of `sub`.
pub fn solve_single_objective(
    sub: &RelaxedSubproblem<'_>,
    c: &[f64],
    limit: TimeLimit,
) -> Result<ScalarResult> {
    let n = sub.instance.n();
    if c.len() != n {
        return Err(Error::dim("objective", n, c.len()));
    }
    let deadline = limit.start();
    let integral_costs = c.iter().all(|v| v.fract() == 0.0);
    let mut best: Option<(f64, Vec<u8>)> = None;
    let mut heap = BinaryHeap::new();
    let mut next_id = 0usize;
    heap.push(Open {
        bound: f64::NEG_INFINITY,
        id: next_id,
        fixings: sub.fixings.clone(),
    });
    let mut node_sub = sub.clone();

    while let Some(open) = heap.pop() {
        let incumbent = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        if open.bound >= incumbent - PRUNE_TOL * (1.0 + incumbent.abs()) {
            continue;
        }
        if deadline.expired() {
            let bound = open.bound.min(incumbent);
            heap.push(open);
            return Ok(timeout(best, bound, &heap));
        }
        node_sub.fixings = open.fixings.clone();
        let Some(mut lp) = node_sub.compile()? else {
            continue;
        };
        let mut value = lp.minimize(c)?;
        if integral_costs {
            value = (value - 1e-9 * (1.0 + value.abs())).ceil();
        }
        if value >= incumbent - PRUNE_TOL * (1.0 + incumbent.abs()) {
            continue;
        }
        let x = lp.primal();
        let frac = |v: f64| (v - v.round()).abs();
        let branch_on = lp
            .free()
            .iter()
            .copied()
            .filter(|&j| frac(x[j]) > INTEGRALITY_TOL)
            .max_by(|&a, &b| frac(x[a]).total_cmp(&frac(x[b])).then(b.cmp(&a)));
        let j = match branch_on {
            Some(j) => j,
            None => {
                let xi: Vec<u8> = x.iter().map(|v| v.round() as u8).collect();
                if feasible(sub, &xi) {
                    let val: f64 = c.iter().zip(&xi).filter(|(_, &v)| v == 1).map(|(c, _)| c).sum();
                    if val < incumbent {
                        best = Some((val, xi));
                    }
                    continue;
                }
                // Integral within tolerance yet not exactly feasible.
                match lp.free().first() {
                    Some(&j) => j,
                    None => continue,
                }
            }
        };
        for v in [0u8, 1u8] {
            next_id += 1;
            heap.push(Open {
                bound: value,
                id: next_id,
                fixings: open.fixings.with(j, v),
            });
        }
    }
    Ok(match best {
        Some((v, x)) => ScalarResult {
            status: ScalarStatus::Optimal,
            solution: Some(x),
            value: Some(v),
            bound: v,
            ip_solves: 1,
        },
        None => ScalarResult::infeasible(1),
    })
}

fn timeout(best: Option<(f64, Vec<u8>)>, current: f64, heap: &BinaryHeap<Open>) -> ScalarResult {
    let open_min = heap.iter().map(|o| o.bound).fold(current, f64::min);
    match best {
        Some((v, x)) => ScalarResult {
            status: ScalarStatus::FeasibleTimeout,
            solution: Some(x),
            value: Some(v),
            bound: open_min.min(v),
            ip_solves: 1,
        },
        None => ScalarResult {
            status: ScalarStatus::NoSolutionTimeout,
            solution: None,
            value: None,
            bound: open_min,
            ip_solves: 1,
        },
    }
}

/// Weighted-sum scalarization. Besides the result, returns the level set
/// `weights · y >= rhs` it proves: the optimal value, or the proven bound
/// after a timeout with a solution.
pub fn solve_weighted_sum_ip(
    sub: &RelaxedSubproblem<'_>,
    weights: &[f64],
    limit: TimeLimit,
) -> Result<(ScalarResult, Option<Halfspace>)> {
    let p = sub.instance.p();
    if weights.len() != p {
        return Err(Error::dim("weights", p, weights.len()));
    }
    if weights.iter().any(|&w| w < 0.0) || weights.iter().all(|&w| w == 0.0) {
        return Err(Error::InvalidConfig("weights must be nonnegative and not all zero".into()));
    }
    let c = sub.weighted_cost(weights);
    let result = solve_single_objective(sub, &c, limit)?;
    let level = match result.status {
        ScalarStatus::Optimal => result.value,
        ScalarStatus::FeasibleTimeout => Some(result.bound),
        _ => None,
    }
    .map(|rhs| Halfspace::new(weights.to_vec(), rhs));
    Ok((result, level))
}

/// Two-stage ε-constraint scalarization on `sub`.
///
/// `eps` holds one bound per objective; entry `k` is ignored. Stage one
/// minimizes `z_k` subject to `z_i <= eps_i`, stage two minimizes the sum
/// of all objectives with `z_k` capped at the stage-one value. Each stage
/// gets the full time limit.
pub fn solve_econstraint(
    sub: &RelaxedSubproblem<'_>,
    k: usize,
    eps: &[f64],
    limit: TimeLimit,
) -> Result<ScalarResult> {
    let p = sub.instance.p();
    if k >= p {
        return Err(Error::InvalidConfig(format!("objective index {k} out of range for p = {p}")));
    }
    if eps.len() != p {
        return Err(Error::dim("epsilon", p, eps.len()));
    }
    let unit = |i: usize, sign: f64| {
        let mut w = vec![0.0; p];
        w[i] = sign;
        w
    };
    let mut stage = sub.clone();
    for (i, &e) in eps.iter().enumerate() {
        if i != k {
            stage.objective_rows.push(ObjectiveRow {
                weights: unit(i, -1.0),
                rhs: -e,
            });
        }
    }
    let first = solve_single_objective(&stage, &stage.weighted_cost(&unit(k, 1.0)), limit)?;
    let (Some(v1), Some(x1)) = (first.value, first.solution.clone()) else {
        return Ok(ScalarResult { ip_solves: 1, ..first });
    };
    stage.objective_rows.push(ObjectiveRow {
        weights: unit(k, -1.0),
        rhs: -v1,
    });
    let second = solve_single_objective(&stage, &stage.weighted_cost(&vec![1.0; p]), limit)?;
    let exact = first.status == ScalarStatus::Optimal && second.status == ScalarStatus::Optimal;
    Ok(match second.solution {
        Some(x) => ScalarResult {
            status: if exact { ScalarStatus::Optimal } else { ScalarStatus::FeasibleTimeout },
            solution: Some(x),
            value: second.value,
            bound: second.bound,
            ip_solves: 2,
        },
        None => ScalarResult {
            status: ScalarStatus::FeasibleTimeout,
            solution: Some(x1),
            value: first.value,
            bound: first.bound,
            ip_solves: 2,
        },
    })
}
