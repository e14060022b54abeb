//! Linear relaxations of subproblems: a dense simplex engine, weighted
//! scalarizations, and the relaxation frontier used as a lower bound set.

mod frontier;
mod simplex;
mod weight_space;

pub use frontier::{
    initial_weights, local_ideal, lower_bound_frontier, FrontierMode, FrontierOptions,
    WEIGHT_AUGMENTATION,
};
pub use simplex::Simplex;

use crate::error::{Error, Result};
use crate::model::{Fixings, Instance};

/// Integer cut `coeffs · x >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl Cut {
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(&a, v)| a as f64 * v).sum::<f64>() - self.rhs as f64
    }

    pub fn holds_binary(&self, x: &[u8]) -> bool {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(_, &v)| v == 1)
            .map(|(a, _)| *a)
            .sum::<i64>()
            >= self.rhs
    }
}

/// Objective-space row `weights · (C x) >= rhs`. Negative weights are
/// allowed, which expresses upper bounds on objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveRow {
    pub weights: Vec<f64>,
    pub rhs: f64,
}

/// The linear relaxation of a node: the instance with some variables
/// fixed, plus inherited cuts and objective-space rows.
#[derive(Debug, Clone)]
pub struct RelaxedSubproblem<'a> {
    pub instance: &'a Instance,
    pub fixings: Fixings,
    pub cuts: Vec<Cut>,
    pub objective_rows: Vec<ObjectiveRow>,
}

impl<'a> RelaxedSubproblem<'a> {
    pub fn root(instance: &'a Instance) -> Self {
        RelaxedSubproblem {
            instance,
            fixings: Fixings::none(instance.n()),
            cuts: Vec::new(),
            objective_rows: Vec::new(),
        }
    }

    pub fn new(instance: &'a Instance, fixings: Fixings, cuts: Vec<Cut>) -> Self {
        RelaxedSubproblem {
            instance,
            fixings,
            cuts,
            objective_rows: Vec::new(),
        }
    }

    /// `weights · C` as a row over all variables.
    pub fn weighted_cost(&self, weights: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.instance.n()];
        for (row, &w) in self.instance.objectives().iter().zip(weights) {
            if w != 0.0 {
                for (cj, &v) in c.iter_mut().zip(row) {
                    *cj += w * v as f64;
                }
            }
        }
        c
    }

    /// Build the simplex over the free variables. `Ok(None)` if infeasible.
    pub fn compile(&self) -> Result<Option<CompiledLp>> {
        let n = self.instance.n();
        if self.fixings.len() != n {
            return Err(Error::dim("fixings", n, self.fixings.len()));
        }
        let free = self.fixings.free_indices();
        let fixed_dot = |a: &dyn Fn(usize) -> f64| -> f64 {
            (0..n)
                .filter(|&j| self.fixings.get(j) == Some(1))
                .map(a)
                .sum()
        };
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        let mut push = |a: &dyn Fn(usize) -> f64, b: f64| {
            let coeffs: Vec<f64> = free.iter().map(|&j| a(j)).collect();
            rows.push((coeffs, b - fixed_dot(a)));
        };
        for (a, b) in self.instance.le_rows() {
            push(&|j| a[j] as f64, b as f64);
        }
        for cut in &self.cuts {
            if cut.coeffs.len() != n {
                return Err(Error::dim("cut", n, cut.coeffs.len()));
            }
            push(&|j| -(cut.coeffs[j] as f64), -(cut.rhs as f64));
        }
        for row in &self.objective_rows {
            if row.weights.len() != self.instance.p() {
                return Err(Error::dim("objective row", self.instance.p(), row.weights.len()));
            }
            let c = self.weighted_cost(&row.weights);
            push(&|j| -c[j], -row.rhs);
        }
        // Rows without free variables are decided here; the simplex only
        // sees the rest.
        let mut kept = Vec::with_capacity(rows.len());
        for (a, b) in rows {
            if a.iter().all(|&v| v == 0.0) {
                if b < -1e-9 * (1.0 + b.abs()) {
                    return Ok(None);
                }
            } else {
                kept.push((a, b));
            }
        }
        let fixed: Vec<usize> = (0..n).filter(|&j| self.fixings.get(j) == Some(1)).collect();
        Ok(Simplex::new(free.len(), &kept)?.map(|simplex| CompiledLp {
            n,
            free,
            ones: fixed,
            simplex,
        }))
    }
}

/// A relaxation ready for repeated solves with different objectives.
#[derive(Debug, Clone)]
pub struct CompiledLp {
    n: usize,
    free: Vec<usize>,
    ones: Vec<usize>,
    simplex: Simplex,
}

impl CompiledLp {
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    fn split(&self, c: &[f64]) -> (Vec<f64>, f64) {
        let reduced = self.free.iter().map(|&j| c[j]).collect();
        let offset = self.ones.iter().map(|&j| c[j]).sum();
        (reduced, offset)
    }

    /// Minimize `c · x` over the relaxation; returns the value.
    pub fn minimize(&mut self, c: &[f64]) -> Result<f64> {
        let (reduced, offset) = self.split(c);
        Ok(self.simplex.minimize(&reduced)? + offset)
    }

    /// Lexicographic minimum of the given full-length objectives.
    pub fn minimize_lex(&mut self, objectives: &[Vec<f64>]) -> Result<Vec<f64>> {
        let parts: Vec<(Vec<f64>, f64)> = objectives.iter().map(|c| self.split(c)).collect();
        let refs: Vec<&[f64]> = parts.iter().map(|(r, _)| r.as_slice()).collect();
        let vals = self.simplex.minimize_lex(&refs)?;
        Ok(vals.iter().zip(&parts).map(|(v, (_, o))| v + o).collect())
    }

    /// Current primal point over all `n` variables.
    pub fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for &j in &self.ones {
            x[j] = 1.0;
        }
        for (&j, v) in self.free.iter().zip(self.simplex.primal()) {
            x[j] = v;
        }
        x
    }
}

/// Image `C x` of a fractional point.
pub fn image_of(instance: &Instance, x: &[f64]) -> Vec<f64> {
    instance
        .objectives()
        .iter()
        .map(|row| row.iter().zip(x).map(|(&c, v)| c as f64 * v).sum())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
}

/// Minimize `weights · C x` over the relaxation.
pub fn solve_weighted_lp(sub: &RelaxedSubproblem<'_>, weights: &[f64]) -> Result<LpResult> {
    if weights.len() != sub.instance.p() {
        return Err(Error::dim("weights", sub.instance.p(), weights.len()));
    }
    if weights.iter().any(|&w| w < 0.0) || weights.iter().all(|&w| w == 0.0) {
        return Err(Error::InvalidConfig("weights must be nonnegative and not all zero".into()));
    }
    let Some(mut lp) = sub.compile()? else {
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            value: f64::INFINITY,
            primal: Vec::new(),
        });
    };
    let c = sub.weighted_cost(weights);
    match lp.minimize(&c) {
        Ok(value) => Ok(LpResult {
            status: LpStatus::Optimal,
            value,
            primal: lp.primal(),
        }),
        Err(Error::Unbounded) => Ok(LpResult {
            status: LpStatus::Unbounded,
            value: f64::NEG_INFINITY,
            primal: Vec::new(),
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;

    fn covering() -> Instance {
        Instance::new("c", "test", vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1]], vec![1], vec![Sense::Ge]).unwrap()
    }

    #[test]
    fn weighted_lp_examples() {
        let inst = covering();
        let sub = RelaxedSubproblem::root(&inst);
        let r = solve_weighted_lp(&sub, &[1.0, 0.0]).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(r.value.abs() < 1e-9);
        assert!((r.primal[0] - 0.0).abs() < 1e-9 && (r.primal[1] - 1.0).abs() < 1e-9);
        let r = solve_weighted_lp(&sub, &[1.0, 1.0]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let inst = Instance::new(
            "i",
            "test",
            vec![vec![1], vec![1]],
            vec![vec![1], vec![1]],
            vec![1, 0],
            vec![Sense::Ge, Sense::Le],
        )
        .unwrap();
        let r = solve_weighted_lp(&RelaxedSubproblem::root(&inst), &[1.0, 1.0]).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn fixings_are_substituted() {
        let inst = covering();
        let sub = RelaxedSubproblem::new(&inst, Fixings::from_pairs(2, &[(1, 0)]).unwrap(), vec![]);
        let r = solve_weighted_lp(&sub, &[0.0, 1.0]).unwrap();
        assert!((r.primal[0] - 1.0).abs() < 1e-9 && r.primal[1] == 0.0);
        let sub = RelaxedSubproblem::new(&inst, Fixings::from_pairs(2, &[(0, 0), (1, 0)]).unwrap(), vec![]);
        assert_eq!(solve_weighted_lp(&sub, &[1.0, 1.0]).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn cuts_and_objective_rows_restrict_the_region() {
        let inst = covering();
        let mut sub = RelaxedSubproblem::new(&inst, Fixings::none(2), vec![Cut { coeffs: vec![1, 0], rhs: 1 }]);
        let r = solve_weighted_lp(&sub, &[1.0, 1.0]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9 && (r.primal[0] - 1.0).abs() < 1e-9);
        sub.objective_rows.push(ObjectiveRow { weights: vec![0.0, 1.0], rhs: 0.5 });
        let r = solve_weighted_lp(&sub, &[1.0, 1.0]).unwrap();
        assert!((r.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_weights() {
        let inst = covering();
        let sub = RelaxedSubproblem::root(&inst);
        assert!(solve_weighted_lp(&sub, &[0.0, 0.0]).is_err());
        assert!(solve_weighted_lp(&sub, &[-1.0, 1.0]).is_err());
        assert!(solve_weighted_lp(&sub, &[1.0]).is_err());
    }
}
