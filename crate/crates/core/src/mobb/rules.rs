//! Cut rounding and pruning, branching variable choice, and the weight of
//! the simple lower bound.

use crate::bounds::{determinant, BoundKind, Halfspace, LowerBoundSet};
use crate::error::{Error, Result};
use crate::lp::Cut;
use crate::model::{Fixings, Instance};

use super::config::Branching;

const ROUND_TOL: f64 = 1e-9;
const FRACTIONAL_TOL: f64 = 1e-6;

/// Round `a · x >= b` to integers: coefficients up, right-hand side down.
/// Returns `None` when the rounded cut holds for every binary `x`.
pub fn round_cut(a: &[f64], b: f64) -> Option<Cut> {
    let coeffs: Vec<i64> = a.iter().map(|v| (v - ROUND_TOL).ceil() as i64).collect();
    let rhs = (b + ROUND_TOL).floor() as i64;
    let weakest: i64 = coeffs.iter().filter(|&&c| c < 0).sum();
    (weakest < rhs).then_some(Cut { coeffs, rhs })
}

/// Level-set inequality `weights · C x >= rhs` as a rounded integer cut.
pub fn level_cut(instance: &Instance, level: &Halfspace) -> Option<Cut> {
    if !level.rhs.is_finite() {
        return None;
    }
    let mut a = vec![0.0; instance.n()];
    for (row, &w) in instance.objectives().iter().zip(&level.weights) {
        for (aj, &c) in a.iter_mut().zip(row) {
            *aj += w * c as f64;
        }
    }
    round_cut(&a, level.rhs)
}

/// Drop cuts that are slack at every extreme solution. Nothing is removed
/// when there are no extreme solutions to judge by.
pub fn prune_redundant_cuts(cuts: &mut Vec<Cut>, extreme_solutions: &[Vec<f64>]) -> usize {
    if extreme_solutions.is_empty() {
        return 0;
    }
    let before = cuts.len();
    cuts.retain(|c| extreme_solutions.iter().any(|x| c.slack(x) <= ROUND_TOL));
    before - cuts.len()
}

/// Sum of ratios `sum_k |c^k_j| / a_j` per variable.
pub fn sum_of_ratios(instance: &Instance) -> Vec<f64> {
    let a = instance.ratio_weights();
    (0..instance.n())
        .map(|j| {
            instance
                .objectives()
                .iter()
                .map(|row| (row[j] as f64).abs())
                .sum::<f64>()
                / a[j]
        })
        .collect()
}

fn argmax_lowest<I: Iterator<Item = (usize, f64)>>(it: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in it {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((j, v));
        }
    }
    best.map(|(j, _)| j)
}

/// Variable to branch on. Most-often-fractional counts fractional entries
/// over the bound's extreme solutions; it falls back to sum of ratios when
/// nothing is fractional or the bound is simple.
pub fn choose_branch_variable(
    instance: &Instance,
    fixings: &Fixings,
    lower: &LowerBoundSet,
    rule: Branching,
) -> Result<usize> {
    let free = fixings.free_indices();
    if free.is_empty() {
        return Err(Error::NoFreeVariable);
    }
    if rule == Branching::MostOftenFractional && lower.kind == BoundKind::Full {
        if let Some(j) = most_often_fractional(&lower.extreme_solutions, &free) {
            return Ok(j);
        }
    }
    let sr = sum_of_ratios(instance);
    Ok(argmax_lowest(free.iter().map(|&j| (j, sr[j]))).expect("free is nonempty"))
}

/// Free variable that is fractional in the most solutions, lowest index on
/// ties; `None` if all are integral.
pub fn most_often_fractional(solutions: &[Vec<f64>], free: &[usize]) -> Option<usize> {
    let counts = free.iter().map(|&j| {
        let c = solutions
            .iter()
            .filter(|x| (x[j] - x[j].round()).abs() > FRACTIONAL_TOL)
            .count();
        (j, c as f64)
    });
    argmax_lowest(counts.filter(|&(_, c)| c > 0.0))
}

/// Weight of the simple lower bound: the normal of the hyperplane through
/// the per-objective minimal surviving lubs of the parent, or all ones if
/// that normal is not a nonnegative, nonzero vector. Normalized to sum 1.
pub fn slb_weight(surviving: &[Vec<i64>], p: usize) -> Vec<f64> {
    let ones = vec![1.0 / p as f64; p];
    if surviving.is_empty() {
        return ones;
    }
    let pick = |k: usize| {
        surviving
            .iter()
            .min_by(|a, b| a[k].cmp(&b[k]).then_with(|| a.cmp(b)))
            .expect("nonempty")
    };
    let pts: Vec<Vec<f64>> = (0..p).map(|k| pick(k).iter().map(|&v| v as f64).collect()).collect();
    let rows: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|q| q.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal: Vec<f64> = (0..p)
        .map(|k| {
            let minor: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, v)| *v).collect())
                .collect();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * determinant(minor)
        })
        .collect();
    if normal.iter().all(|&v| v <= 0.0) {
        for v in &mut normal {
            *v = -*v;
        }
    }
    let sum: f64 = normal.iter().sum();
    if normal.iter().any(|&v| v < 0.0) || sum <= 0.0 || !sum.is_finite() {
        return ones;
    }
    normal.iter().map(|v| v / sum).collect()
}
