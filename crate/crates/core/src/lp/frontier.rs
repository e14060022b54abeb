//! Lower bound sets from the linear relaxation's nondominated frontier.

use super::weight_space::WeightSpace;
use super::{image_of, CompiledLp, RelaxedSubproblem};
use crate::bounds::{Halfspace, LowerBoundSet};
use crate::error::{Error, Result};
use crate::model::Instance;

/// Augmentation added to unit weights before normalization.
pub const WEIGHT_AUGMENTATION: f64 = 1e-3;
const DICHOTOMIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierMode {
    /// Dichotomic search over all extreme supported points; `p = 2` only.
    Exact2D,
    /// Weight-space outer approximation with bounded refinement.
    OuterApprox,
}

impl FrontierMode {
    pub fn for_objectives(p: usize) -> Self {
        if p == 2 {
            FrontierMode::Exact2D
        } else {
            FrontierMode::OuterApprox
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierOptions {
    /// LP solves allowed after the initial `p + 1` weights.
    pub refine_max: usize,
    /// Violation below which a weight-space vertex counts as supported.
    pub facet_tol: f64,
}

impl Default for FrontierOptions {
    fn default() -> Self {
        FrontierOptions {
            refine_max: 50,
            facet_tol: 1e-7,
        }
    }
}

/// The `p + 1` weights used to start the outer approximation and the
/// warmstart: augmented unit vectors followed by equal weights.
pub fn initial_weights(p: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(p + 1);
    for k in 0..p {
        let mut w = vec![WEIGHT_AUGMENTATION; p];
        w[k] += 1.0;
        let s: f64 = w.iter().sum();
        out.push(w.into_iter().map(|v| v / s).collect());
    }
    out.push(vec![1.0 / p as f64; p]);
    out
}

/// Componentwise minimum over the bound set.
pub fn local_ideal(lower: &LowerBoundSet) -> Result<Vec<f64>> {
    lower.local_ideal()
}

/// Outer description of the relaxation's frontier, or `None` if the
/// relaxation is infeasible.
pub fn lower_bound_frontier(
    sub: &RelaxedSubproblem<'_>,
    mode: FrontierMode,
    opts: &FrontierOptions,
) -> Result<Option<LowerBoundSet>> {
    let p = sub.instance.p();
    if mode == FrontierMode::Exact2D && p != 2 {
        return Err(Error::InvalidConfig(format!(
            "exact frontier needs two objectives, got {p}"
        )));
    }
    let Some(lp) = sub.compile()? else {
        return Ok(None);
    };
    let lower = match mode {
        FrontierMode::Exact2D => dichotomic(sub, lp)?,
        FrontierMode::OuterApprox => outer_approx(sub, lp, opts)?,
    };
    Ok(Some(lower))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= DICHOTOMIC_TOL * (1.0 + a.abs().max(b.abs()))
}

struct Dichotomic<'s, 'a> {
    sub: &'s RelaxedSubproblem<'a>,
    lp: CompiledLp,
    points: Vec<(Vec<f64>, Vec<f64>)>,
    planes: Vec<Halfspace>,
}

impl Dichotomic<'_, '_> {
    fn solve(&mut self, w: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
        let v = self.lp.minimize(&self.sub.weighted_cost(w))?;
        let x = self.lp.primal();
        Ok((v, image_of(self.sub.instance, &x), x))
    }

    fn recurse(&mut self, a: &[f64], b: &[f64]) -> Result<()> {
        let w = Halfspace::new(vec![a[1] - b[1], b[0] - a[0]], 0.0).normalized().weights;
        let (v, y, x) = self.solve(&w)?;
        let level = w[0] * a[0] + w[1] * a[1];
        let inside = y[0] > a[0] && y[0] < b[0] && !close(y[0], a[0]) && !close(y[0], b[0]);
        if v < level - DICHOTOMIC_TOL * (1.0 + level.abs()) && inside {
            self.recurse(a, &y)?;
            self.points.push((y.clone(), x));
            self.recurse(&y, b)
        } else {
            self.planes.push(Halfspace::new(w, v.min(level)));
            Ok(())
        }
    }
}

fn dichotomic(sub: &RelaxedSubproblem<'_>, mut lp: CompiledLp) -> Result<LowerBoundSet> {
    let c0 = sub.weighted_cost(&[1.0, 0.0]);
    let c1 = sub.weighted_cost(&[0.0, 1.0]);
    lp.minimize_lex(&[c0.clone(), c1.clone()])?;
    let xa = lp.primal();
    let ya = image_of(sub.instance, &xa);
    lp.minimize_lex(&[c1, c0])?;
    let xb = lp.primal();
    let yb = image_of(sub.instance, &xb);

    if close(ya[0], yb[0]) && close(ya[1], yb[1]) {
        return Ok(LowerBoundSet::full(
            vec![Halfspace::axis(2, 0, ya[0]), Halfspace::axis(2, 1, ya[1])],
            vec![ya.clone()],
            vec![xa],
            ya,
        ));
    }
    let mut d = Dichotomic {
        sub,
        lp,
        points: vec![(ya.clone(), xa)],
        planes: vec![Halfspace::axis(2, 0, ya[0])],
    };
    d.recurse(&ya, &yb)?;
    d.points.push((yb.clone(), xb));
    d.planes.push(Halfspace::axis(2, 1, yb[1]));
    let (pts, sols) = d.points.into_iter().unzip();
    Ok(LowerBoundSet::full(d.planes, pts, sols, vec![ya[0], yb[1]]))
}

/// Smallest value of objective `k` over the box, ignoring all rows.
fn box_bound(instance: &Instance, sub: &RelaxedSubproblem<'_>, k: usize) -> f64 {
    instance.objectives()[k]
        .iter()
        .enumerate()
        .map(|(j, &c)| match sub.fixings.get(j) {
            Some(1) => c as f64,
            Some(_) => 0.0,
            None => (c as f64).min(0.0),
        })
        .sum()
}

fn outer_approx(
    sub: &RelaxedSubproblem<'_>,
    mut lp: CompiledLp,
    opts: &FrontierOptions,
) -> Result<LowerBoundSet> {
    let inst = sub.instance;
    let p = inst.p();
    let m = inst.big_m() as f64;
    let mut ws = WeightSpace::new(p, -m - 1.0, m + 1.0);
    let mut planes: Vec<Halfspace> = Vec::new();
    let mut points: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    let mut unit: Vec<Option<f64>> = vec![None; p];

    let mut solve = |w: &[f64], planes: &mut Vec<Halfspace>, points: &mut Vec<(Vec<f64>, Vec<f64>)>| -> Result<(f64, Vec<f64>)> {
        let v = lp.minimize(&sub.weighted_cost(w))?;
        let x = lp.primal();
        let y = image_of(inst, &x);
        if let Some(k) = w.iter().position(|&wk| wk == 1.0) {
            unit[k] = Some(v);
        }
        if !planes.iter().any(|h| h.weights == w) {
            planes.push(Halfspace::new(w.to_vec(), v));
        }
        let fresh = !points
            .iter()
            .any(|(q, _)| q.iter().zip(&y).all(|(a, b)| close(*a, *b)));
        if fresh {
            points.push((y.clone(), x));
        }
        Ok((v, y))
    };

    for w in initial_weights(p) {
        let (_, y) = solve(&w, &mut planes, &mut points)?;
        ws.add_point(&y);
    }

    for _ in 0..opts.refine_max {
        let candidates = || {
            ws.vertices()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.verified && !ws.is_bottom(v))
        };
        let pick = candidates()
            .find(|(_, v)| ws.is_corner(v))
            .or_else(|| candidates().next())
            .map(|(i, _)| i);
        let Some(idx) = pick else { break };
        let vertex = &ws.vertices()[idx];
        let mut w = ws.weights(vertex);
        // Exact unit weights let the solve record a facet offset.
        if let Some(k) = w.iter().position(|&x| x >= 1.0 - 1e-12) {
            w = vec![0.0; p];
            w[k] = 1.0;
        }
        let r = ws.level(vertex);
        let (v, y) = solve(&w, &mut planes, &mut points)?;
        if v < r - opts.facet_tol * (1.0 + r.abs()) {
            if !ws.add_point(&y) {
                ws.mark_verified(idx);
            }
        } else {
            ws.mark_verified(idx);
        }
    }

    let offsets: Vec<f64> = (0..p)
        .map(|k| unit[k].unwrap_or_else(|| box_bound(inst, sub, k)))
        .collect();
    let (pts, sols) = points.into_iter().unzip();
    Ok(LowerBoundSet::full(planes, pts, sols, offsets))
}
