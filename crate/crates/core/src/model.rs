//! Problem data, componentwise dominance and the exhaustive oracle.
//!
//! An [`Instance`] is a multi-objective binary program
//! `min (c_1 x, ..., c_p x)` subject to `A x (<=|>=|=) b`, `x ∈ {0,1}^n`,
//! with integer data throughout. Images of binary points are therefore
//! integer vectors and are compared exactly.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Default cap on the number of free variables the oracle will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 25;

/// Row sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Le => "le",
            Sense::Ge => "ge",
            Sense::Eq => "eq",
        }
    }

    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// A multi-objective 0-1 linear program with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    problem: String,
    objectives: Vec<Vec<i64>>,
    constraints: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    senses: Vec<Sense>,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        problem: impl Into<String>,
        objectives: Vec<Vec<i64>>,
        constraints: Vec<Vec<i64>>,
        rhs: Vec<i64>,
        senses: Vec<Sense>,
    ) -> Result<Self> {
        let p = objectives.len();
        if p < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 objectives, got {p}"
            )));
        }
        let n = objectives[0].len();
        if n == 0 {
            return Err(Error::InvalidInstance("no variables".into()));
        }
        if let Some(row) = objectives.iter().find(|r| r.len() != n) {
            return Err(Error::dim("objective row", n, row.len()));
        }
        let m = constraints.len();
        if m == 0 {
            return Err(Error::InvalidInstance("no constraints".into()));
        }
        if let Some(row) = constraints.iter().find(|r| r.len() != n) {
            return Err(Error::dim("constraint row", n, row.len()));
        }
        if rhs.len() != m {
            return Err(Error::dim("right-hand side", m, rhs.len()));
        }
        if senses.len() != m {
            return Err(Error::dim("senses", m, senses.len()));
        }
        Ok(Instance {
            name: name.into(),
            problem: problem.into(),
            objectives,
            constraints,
            rhs,
            senses,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Problem family tag (`KP`, `UFLP`, ... or free text).
    pub fn problem(&self) -> &str {
        &self.problem
    }

    pub fn p(&self) -> usize {
        self.objectives.len()
    }

    pub fn n(&self) -> usize {
        self.objectives[0].len()
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn objectives(&self) -> &[Vec<i64>] {
        &self.objectives
    }

    pub fn constraints(&self) -> &[Vec<i64>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[i64] {
        &self.rhs
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    fn check_binary(&self, x: &[u8]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::dim("binary vector", self.n(), x.len()));
        }
        if x.iter().any(|&v| v > 1) {
            return Err(Error::InvalidInstance("vector is not binary".into()));
        }
        Ok(())
    }

    /// Image `C x` of a binary vector.
    pub fn evaluate(&self, x: &[u8]) -> Result<Vec<i64>> {
        self.check_binary(x)?;
        Ok(self.image_unchecked(x))
    }

    pub(crate) fn image_unchecked(&self, x: &[u8]) -> Vec<i64> {
        self.objectives
            .iter()
            .map(|row| dot_binary(row, x))
            .collect()
    }

    pub fn is_feasible(&self, x: &[u8]) -> Result<bool> {
        self.check_binary(x)?;
        Ok(self.feasible_unchecked(x))
    }

    pub(crate) fn feasible_unchecked(&self, x: &[u8]) -> bool {
        self.constraints
            .iter()
            .zip(&self.rhs)
            .zip(&self.senses)
            .all(|((row, &b), &s)| s.holds(dot_binary(row, x), b))
    }

    /// Constraint system rewritten as `a x <= b` rows; equalities become two rows.
    pub fn le_rows(&self) -> Vec<(Vec<i64>, i64)> {
        let mut rows = Vec::with_capacity(self.m() * 2);
        for ((row, &b), &s) in self.constraints.iter().zip(&self.rhs).zip(&self.senses) {
            let neg = || row.iter().map(|v| -v).collect::<Vec<_>>();
            match s {
                Sense::Le => rows.push((row.clone(), b)),
                Sense::Ge => rows.push((neg(), -b)),
                Sense::Eq => {
                    rows.push((row.clone(), b));
                    rows.push((neg(), -b));
                }
            }
        }
        rows
    }

    /// One more than the largest absolute objective row sum, so every
    /// attainable objective value lies strictly inside `(-M, M)`.
    pub fn big_m(&self) -> i64 {
        1 + self
            .objectives
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<i64>())
            .max()
            .unwrap_or(0)
    }

    /// Per-variable denominators for the sum-of-ratios branching rule.
    ///
    /// A variable's weight is its coefficient in the first `<=` row whose
    /// coefficients are all nonnegative and which involves that variable
    /// (the capacity row of a knapsack, the workload of a GAP agent).
    /// Variables without such a row get weight 1.
    pub fn ratio_weights(&self) -> Vec<f64> {
        let capacity_rows: Vec<usize> = (0..self.m())
            .filter(|&i| self.senses[i] == Sense::Le && self.constraints[i].iter().all(|&v| v >= 0))
            .collect();
        (0..self.n())
            .map(|j| {
                capacity_rows
                    .iter()
                    .map(|&i| self.constraints[i][j])
                    .find(|&a| a > 0)
                    .map_or(1.0, |a| a as f64)
            })
            .collect()
    }
}

fn dot_binary(row: &[i64], x: &[u8]) -> i64 {
    row.iter()
        .zip(x)
        .filter(|(_, &v)| v == 1)
        .map(|(c, _)| *c)
        .sum()
}

/// Relation of a first point to a second one under the componentwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// Smaller in every component.
    StrictlyDominates,
    /// Weakly smaller, and different.
    Dominates,
    /// Identical points: weak dominance holds both ways.
    Equal,
    DominatedBy,
    StrictlyDominatedBy,
    Incomparable,
}

impl Dominance {
    /// Whether the first point weakly dominates the second (`y1 ≦ y2`).
    pub fn weakly_dominates(self) -> bool {
        matches!(
            self,
            Dominance::StrictlyDominates | Dominance::Dominates | Dominance::Equal
        )
    }

    /// Whether the first point dominates the second (`y1 ≤ y2`, `y1 ≠ y2`).
    pub fn dominates(self) -> bool {
        matches!(self, Dominance::StrictlyDominates | Dominance::Dominates)
    }

    pub fn reverse(self) -> Self {
        match self {
            Dominance::StrictlyDominates => Dominance::StrictlyDominatedBy,
            Dominance::Dominates => Dominance::DominatedBy,
            Dominance::Equal => Dominance::Equal,
            Dominance::DominatedBy => Dominance::Dominates,
            Dominance::StrictlyDominatedBy => Dominance::StrictlyDominates,
            Dominance::Incomparable => Dominance::Incomparable,
        }
    }
}

/// Classify `a` against `b`.
pub fn compare<T: PartialOrd>(a: &[T], b: &[T]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::dim("objective point", a.len(), b.len()));
    }
    let (mut less, mut greater) = (0usize, 0usize);
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Less) => less += 1,
            Some(Ordering::Greater) => greater += 1,
            Some(Ordering::Equal) => {}
            None => return Ok(Dominance::Incomparable),
        }
    }
    let len = a.len();
    Ok(match (less, greater) {
        (0, 0) => Dominance::Equal,
        (l, 0) if l == len => Dominance::StrictlyDominates,
        (_, 0) => Dominance::Dominates,
        (0, g) if g == len => Dominance::StrictlyDominatedBy,
        (0, _) => Dominance::DominatedBy,
        _ => Dominance::Incomparable,
    })
}

/// `a ≦ b` componentwise. Lengths must agree.
pub fn weakly_dominates<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `a < b` in every component.
pub fn strictly_dominates<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| x < y)
}

/// `a ≤ b` and `a ≠ b`.
pub fn dominates<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    weakly_dominates(a, b) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// A feasible binary vector together with its image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    x: Vec<u8>,
    image: Vec<i64>,
}

impl Solution {
    pub fn new(instance: &Instance, x: Vec<u8>) -> Result<Self> {
        let image = instance.evaluate(&x)?;
        Ok(Solution { x, image })
    }

    /// Build from a known image; the image is re-checked against `C x`.
    pub fn with_image(instance: &Instance, x: Vec<u8>, image: Vec<i64>) -> Result<Self> {
        let actual = instance.evaluate(&x)?;
        if actual != image {
            return Err(Error::InvalidInstance(format!(
                "stored image {image:?} differs from C x = {actual:?}"
            )));
        }
        Ok(Solution { x, image })
    }

    pub(crate) fn with_image_unchecked(x: Vec<u8>, image: Vec<i64>) -> Self {
        Solution { x, image }
    }

    pub fn x(&self) -> &[u8] {
        &self.x
    }

    pub fn image(&self) -> &[i64] {
        &self.image
    }
}

/// Partial assignment of the binary variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fixings(Vec<Option<u8>>);

impl Fixings {
    pub fn none(n: usize) -> Self {
        Fixings(vec![None; n])
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, u8)]) -> Result<Self> {
        let mut f = Fixings::none(n);
        for &(j, v) in pairs {
            if j >= n {
                return Err(Error::dim("fixing index", n, j));
            }
            if v > 1 {
                return Err(Error::InvalidInstance(format!(
                    "fixing value {v} for x{j} is not binary"
                )));
            }
            f.0[j] = Some(v);
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<u8> {
        self.0[j]
    }

    pub fn as_slice(&self) -> &[Option<u8>] {
        &self.0
    }

    /// Copy with `x_j` fixed to `value`.
    pub fn with(&self, j: usize, value: u8) -> Self {
        let mut f = self.clone();
        f.0[j] = Some(value);
        f
    }

    pub fn fixed_count(&self) -> usize {
        self.0.iter().filter(|v| v.is_some()).count()
    }

    pub fn free_count(&self) -> usize {
        self.0.len() - self.fixed_count()
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| self.0[j].is_none()).collect()
    }
}

/// Exhaustively compute the nondominated images over all feasible
/// completions of `fixings`, with one solution per image.
///
/// Among solutions sharing an image the lexicographically smallest `x` is
/// kept. The result is sorted lexicographically by image.
pub fn enumerate_nondominated(
    instance: &Instance,
    fixings: &Fixings,
    cap: usize,
) -> Result<Vec<Solution>> {
    if fixings.len() != instance.n() {
        return Err(Error::dim("fixings", instance.n(), fixings.len()));
    }
    let free = fixings.free_indices();
    if free.len() > cap {
        return Err(Error::EnumerationCap {
            free: free.len(),
            cap,
        });
    }
    let p = instance.p();
    let m = instance.m();
    let mut x: Vec<u8> = fixings.as_slice().iter().map(|v| v.unwrap_or(0)).collect();
    let mut activity: Vec<i64> = instance
        .constraints()
        .iter()
        .map(|row| dot_binary(row, &x))
        .collect();
    let mut image = instance.image_unchecked(&x);

    let mut front: Vec<Solution> = Vec::new();
    let total: u64 = 1u64 << free.len();
    // Gray-code walk: one variable flips per step.
    for step in 0..total {
        if step > 0 {
            let bit = step.trailing_zeros() as usize;
            let j = free[bit];
            let delta: i64 = if x[j] == 0 { 1 } else { -1 };
            x[j] ^= 1;
            for i in 0..m {
                activity[i] += delta * instance.constraints[i][j];
            }
            for k in 0..p {
                image[k] += delta * instance.objectives[k][j];
            }
        }
        let feasible = (0..m).all(|i| instance.senses[i].holds(activity[i], instance.rhs[i]));
        if feasible {
            offer(&mut front, &x, &image);
        }
    }
    front.sort_by(|a, b| a.image.cmp(&b.image));
    Ok(front)
}

fn offer(front: &mut Vec<Solution>, x: &[u8], image: &[i64]) {
    for sol in front.iter_mut() {
        if sol.image == image {
            if x < sol.x.as_slice() {
                sol.x = x.to_vec();
            }
            return;
        }
        if weakly_dominates(&sol.image, image) {
            return;
        }
    }
    front.retain(|s| !weakly_dominates(image, &s.image));
    front.push(Solution {
        x: x.to_vec(),
        image: image.to_vec(),
    });
}

/// Componentwise minimum (ideal point) and maximum (Nadir point when the
/// input is a nondominated set).
pub fn ideal_and_nadir<T: Copy + PartialOrd>(points: &[Vec<T>]) -> Result<(Vec<T>, Vec<T>)> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let mut ideal = first.clone();
    let mut nadir = first.clone();
    for pt in &points[1..] {
        if pt.len() != ideal.len() {
            return Err(Error::dim("objective point", ideal.len(), pt.len()));
        }
        for k in 0..pt.len() {
            if pt[k] < ideal[k] {
                ideal[k] = pt[k];
            }
            if pt[k] > nadir[k] {
                nadir[k] = pt[k];
            }
        }
    }
    Ok((ideal, nadir))
}
