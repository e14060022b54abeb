//! Polyhedral lower bound sets and the geometry built on them: the
//! dominance test against local upper bounds and both hypervolume gap
//! measures.

use crate::error::{Error, Result};

/// Relative slack required before a point counts as strictly above a
/// hyperplane.
pub const ABOVE_TOL: f64 = 1e-9;

/// Supporting halfspace `weights · y >= rhs` in objective space.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub weights: Vec<f64>,
    pub rhs: f64,
}

impl Halfspace {
    pub fn new(weights: Vec<f64>, rhs: f64) -> Self {
        Halfspace { weights, rhs }
    }

    /// Axis-parallel facet `y_k >= offset`.
    pub fn axis(p: usize, k: usize, offset: f64) -> Self {
        let mut w = vec![0.0; p];
        w[k] = 1.0;
        Halfspace::new(w, offset)
    }

    /// Rescaled so the weights sum to one.
    pub fn normalized(mut self) -> Self {
        let s: f64 = self.weights.iter().sum();
        if s > 0.0 {
            for w in &mut self.weights {
                *w /= s;
            }
            self.rhs /= s;
        }
        self
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        self.weights.iter().zip(y).map(|(w, v)| w * v).sum()
    }

    pub fn strictly_above(&self, y: &[f64]) -> bool {
        self.value(y) > self.rhs + ABOVE_TOL * (1.0 + self.rhs.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Outer description of the linear relaxation's frontier.
    Full,
    /// One weighted-sum level set plus the parent's axis-parallel facets.
    Simple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMeasure {
    /// Simplex between a local upper bound and its spanning points.
    Lhg,
    /// Box between a local upper bound and the local ideal point.
    Hsz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundSet {
    pub kind: BoundKind,
    pub hyperplanes: Vec<Halfspace>,
    pub extreme_points: Vec<Vec<f64>>,
    /// Relaxation solutions (full length `n`) aligned with `extreme_points`.
    pub extreme_solutions: Vec<Vec<f64>>,
    /// Valid bounds `y_k >= facet_offsets[k]`: the extreme facets.
    pub facet_offsets: Vec<f64>,
    axis_facets: Vec<Halfspace>,
}

impl LowerBoundSet {
    pub fn full(
        hyperplanes: Vec<Halfspace>,
        extreme_points: Vec<Vec<f64>>,
        extreme_solutions: Vec<Vec<f64>>,
        facet_offsets: Vec<f64>,
    ) -> Self {
        LowerBoundSet {
            kind: BoundKind::Full,
            hyperplanes,
            extreme_points,
            extreme_solutions,
            facet_offsets,
            axis_facets: Vec::new(),
        }
    }

    /// Simple bound: `level` (if any) plus the facets `y_k >= facet_offsets[k]`.
    pub fn simple(
        level: Option<Halfspace>,
        facet_offsets: Vec<f64>,
        point: Option<(Vec<f64>, Vec<f64>)>,
    ) -> Self {
        let p = facet_offsets.len();
        let axis_facets = facet_offsets
            .iter()
            .enumerate()
            .map(|(k, &o)| Halfspace::axis(p, k, o))
            .collect();
        let (extreme_points, extreme_solutions) = match point {
            Some((y, x)) => (vec![y], vec![x]),
            None => (Vec::new(), Vec::new()),
        };
        LowerBoundSet {
            kind: BoundKind::Simple,
            hyperplanes: level.into_iter().collect(),
            extreme_points,
            extreme_solutions,
            facet_offsets,
            axis_facets,
        }
    }

    /// Bi-objective bound whose frontier is the polyline through `vertices`
    /// (sorted by increasing first coordinate), closed by a vertical ray
    /// above the first vertex and a horizontal ray right of the last one.
    pub fn from_polyline(vertices: &[[f64; 2]]) -> Self {
        let first = vertices[0];
        let last = vertices[vertices.len() - 1];
        let mut hyperplanes = vec![Halfspace::axis(2, 0, first[0])];
        for w in vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            let normal = vec![a[1] - b[1], b[0] - a[0]];
            let rhs = normal[0] * a[0] + normal[1] * a[1];
            hyperplanes.push(Halfspace::new(normal, rhs).normalized());
        }
        hyperplanes.push(Halfspace::axis(2, 1, last[1]));
        LowerBoundSet::full(
            hyperplanes,
            vertices.iter().map(|v| v.to_vec()).collect(),
            Vec::new(),
            vec![first[0], last[1]],
        )
    }

    pub fn p(&self) -> usize {
        self.facet_offsets.len()
    }

    /// Every halfspace describing `L + R^p_≧`, extreme facets included for
    /// the simple kind.
    pub fn halfspaces(&self) -> impl Iterator<Item = &Halfspace> {
        self.hyperplanes.iter().chain(self.axis_facets.iter())
    }

    /// Componentwise minimum over the bound set.
    pub fn local_ideal(&self) -> Result<Vec<f64>> {
        match self.kind {
            BoundKind::Simple => Ok(self.facet_offsets.clone()),
            BoundKind::Full => {
                let first = self
                    .extreme_points
                    .first()
                    .ok_or(Error::Empty("lower bound set"))?;
                let mut ideal = first.clone();
                for pt in &self.extreme_points[1..] {
                    for (i, v) in ideal.iter_mut().zip(pt) {
                        if v < i {
                            *i = *v;
                        }
                    }
                }
                Ok(ideal)
            }
        }
    }

    /// True iff `y` lies in the interior of `L + R^p_≧`.
    pub fn is_strictly_above(&self, y: &[f64]) -> bool {
        self.halfspaces().all(|h| h.strictly_above(y))
    }

    /// The unique frontier point when the relaxation's ideal point is
    /// attained, i.e. `L + R^p_≧ = y + R^p_≧`.
    pub fn single_point(&self) -> Option<&[f64]> {
        if self.kind != BoundKind::Full {
            return None;
        }
        let first = self.extreme_points.first()?;
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        if self.extreme_points.iter().all(|pt| close(pt, first)) && close(first, &self.facet_offsets) {
            Some(first)
        } else {
            None
        }
    }
}

/// See [`LowerBoundSet::is_strictly_above`].
pub fn is_strictly_above(lower: &LowerBoundSet, y: &[f64]) -> bool {
    lower.is_strictly_above(y)
}

pub fn to_f64(v: &[i64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

/// Whether the open box below `lub` may still hold a new nondominated point.
///
/// With `integral` set, new points must be integer and lie in `lub - 1`'s
/// closed box, so the test becomes membership of `lub - 1` in `L + R^p_≧`.
pub fn lub_survives(lower: &LowerBoundSet, lub: &[i64], integral: bool) -> bool {
    if integral {
        let y: Vec<f64> = lub.iter().map(|&u| (u - 1) as f64).collect();
        lower.halfspaces().all(|h| {
            h.value(&y) >= h.rhs - ABOVE_TOL * (1.0 + h.rhs.abs())
        })
    } else {
        lower.is_strictly_above(&to_f64(lub))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FathomCheck {
    pub fathom: bool,
    pub surviving: Vec<Vec<i64>>,
}

/// Dominance fathoming: the node can be discarded when no local upper
/// bound lies strictly above the lower bound set.
pub fn dominance_fathom(lower: &LowerBoundSet, lubs: &[Vec<i64>], integral: bool) -> FathomCheck {
    let surviving: Vec<Vec<i64>> = lubs
        .iter()
        .filter(|u| lub_survives(lower, u, integral))
        .cloned()
        .collect();
    FathomCheck {
        fathom: surviving.is_empty(),
        surviving,
    }
}

/// Axis-parallel projections of `lub` onto the boundary of `L + R^p_≧`.
///
/// The `i`-th point moves `lub` along `-e_i` until it meets the first
/// halfspace; every other coordinate (in particular the pinned coordinate
/// `p - 1 - i` for `i != p - 1 - i`) keeps its value. A ray that meets no
/// halfspace stops at the local ideal coordinate.
pub fn spanning_points(lower: &LowerBoundSet, lub: &[f64]) -> Result<Vec<Vec<f64>>> {
    let p = lub.len();
    if p != lower.p() {
        return Err(Error::dim("local upper bound", lower.p(), p));
    }
    if !lower.is_strictly_above(lub) {
        return Err(Error::NotAbove);
    }
    let ideal = lower.local_ideal().unwrap_or_else(|_| lower.facet_offsets.clone());
    let mut points = Vec::with_capacity(p);
    for j in 0..p {
        let mut step: Option<f64> = None;
        for h in lower.halfspaces() {
            let w = h.weights[j];
            if w > 1e-12 {
                let t = (h.value(lub) - h.rhs) / w;
                step = Some(step.map_or(t, |s: f64| s.min(t)));
            }
        }
        let t = step.unwrap_or(lub[j] - ideal[j]).max(0.0);
        let mut sp = lub.to_vec();
        sp[j] -= t;
        points.push(sp);
    }
    Ok(points)
}

/// Volume `|det(G)| / p!` of the simplex with apex `lub`, where the
/// columns of `G` are `sp^i - lub`.
pub fn hv_simplex_gap(lub: &[f64], spanning: &[Vec<f64>]) -> f64 {
    let p = lub.len();
    let g: Vec<Vec<f64>> = (0..p)
        .map(|r| spanning.iter().map(|sp| sp[r] - lub[r]).collect())
        .collect();
    let fact: f64 = (1..=p).map(|k| k as f64).product();
    determinant(g).abs() / fact
}

/// Volume of the box between `lub` and the local ideal point.
pub fn hv_box_gap(lub: &[f64], ideal: &[f64]) -> f64 {
    lub.iter()
        .zip(ideal)
        .map(|(u, l)| (u - l).max(0.0))
        .product()
}

/// Largest per-lub gap over `surviving`, with the index attaining it
/// (first on ties). Zero and `None` when nothing survives.
pub fn gap_over(lower: &LowerBoundSet, surviving: &[Vec<i64>], measure: GapMeasure) -> (f64, Option<usize>) {
    let ideal = lower.local_ideal().unwrap_or_else(|_| lower.facet_offsets.clone());
    let mut best = (0.0, None);
    for (i, u) in surviving.iter().enumerate() {
        let uf = to_f64(u);
        let g = match measure {
            GapMeasure::Hsz => hv_box_gap(&uf, &ideal),
            GapMeasure::Lhg => match spanning_points(lower, &uf) {
                Ok(sp) => hv_simplex_gap(&uf, &sp),
                Err(_) => 0.0,
            },
        };
        if best.1.is_none() || g > best.0 {
            best = (g, Some(i));
        }
    }
    best
}

/// Gap of a node: the maximum per-lub gap over the lubs that survive the
/// dominance test against `lower`.
pub fn node_gap(lower: &LowerBoundSet, lubs: &[Vec<i64>], measure: GapMeasure) -> f64 {
    let check = dominance_fathom(lower, lubs, false);
    gap_over(lower, &check.surviving, measure).0
}

pub(crate) fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    det
}
