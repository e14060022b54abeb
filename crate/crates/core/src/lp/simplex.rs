//! Dense two-phase primal simplex over the box `0 <= x <= 1`.
//!
//! A [`Simplex`] is built once per feasible region (phase 1 runs in the
//! constructor) and then re-optimized for as many objectives as needed,
//! each solve starting from the previous optimal basis.

use crate::clock::count_pivot;
use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;
const LEX_TOL: f64 = 1e-9;
const BLAND_AFTER: usize = 1000;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone)]
pub struct Simplex {
    n: usize,
    width: usize,
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

impl Simplex {
    /// Set up `a x <= b` rows (plus implicit `x <= 1`) and run phase 1.
    /// Returns `Ok(None)` when the region is empty.
    pub fn new(n: usize, constraints: &[(Vec<f64>, f64)]) -> Result<Option<Simplex>> {
        let m = constraints.len() + n;
        let n_art = constraints.iter().filter(|(_, b)| *b < 0.0).count();
        let width = n + m + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = n + m;
        for (i, (a, b)) in constraints.iter().enumerate() {
            debug_assert_eq!(a.len(), n);
            let mut row = vec![0.0; width + 1];
            if *b >= 0.0 {
                row[..n].copy_from_slice(a);
                row[n + i] = 1.0;
                row[width] = *b;
                basis.push(n + i);
            } else {
                for j in 0..n {
                    row[j] = -a[j];
                }
                row[n + i] = -1.0;
                row[art] = 1.0;
                row[width] = -*b;
                basis.push(art);
                art += 1;
            }
            rows.push(row);
        }
        for j in 0..n {
            let i = constraints.len() + j;
            let mut row = vec![0.0; width + 1];
            row[j] = 1.0;
            row[n + i] = 1.0;
            row[width] = 1.0;
            rows.push(row);
            basis.push(n + i);
        }
        let mut s = Simplex {
            n,
            width,
            rows,
            basis,
        };
        if n_art > 0 {
            let first_art = n + m;
            let mut cost = vec![0.0; width];
            for c in &mut cost[first_art..] {
                *c = 1.0;
            }
            s.optimize(&cost, &vec![false; width])?;
            let infeasibility: f64 = s
                .basis
                .iter()
                .zip(&s.rows)
                .filter(|(&b, _)| b >= first_art)
                .map(|(_, r)| r[width])
                .sum();
            if infeasibility > PHASE1_TOL {
                return Ok(None);
            }
            s.drop_artificials(first_art);
        }
        Ok(Some(s))
    }

    fn drop_artificials(&mut self, first_art: usize) {
        let mut redundant = Vec::new();
        for r in 0..self.rows.len() {
            if self.basis[r] < first_art {
                continue;
            }
            let col = (0..first_art)
                .filter(|&j| self.rows[r][j].abs() > PHASE1_TOL)
                .max_by(|&a, &b| self.rows[r][a].abs().total_cmp(&self.rows[r][b].abs()));
            match col {
                Some(q) => self.pivot(r, q),
                None => redundant.push(r),
            }
        }
        for &r in redundant.iter().rev() {
            self.rows.remove(r);
            self.basis.remove(r);
        }
        let width = self.width;
        for row in &mut self.rows {
            let rhs = row[width];
            row.truncate(first_art);
            row.push(rhs);
        }
        self.width = first_art;
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    fn padded(&self, c: &[f64]) -> Vec<f64> {
        let mut cost = vec![0.0; self.width];
        cost[..self.n].copy_from_slice(c);
        cost
    }

    /// Minimize `c x`; returns the optimal value.
    pub fn minimize(&mut self, c: &[f64]) -> Result<f64> {
        debug_assert_eq!(c.len(), self.n);
        let cost = self.padded(c);
        self.optimize(&cost, &vec![false; self.width])?;
        Ok(self.value(c))
    }

    /// Lexicographic minimization: each objective is minimized over the
    /// optimal face of the previous ones. Returns the value of every level.
    pub fn minimize_lex(&mut self, objectives: &[&[f64]]) -> Result<Vec<f64>> {
        let mut barred = vec![false; self.width];
        for c in objectives {
            let cost = self.padded(c);
            self.optimize(&cost, &barred)?;
            let d = self.reduced_costs(&cost);
            let mut basic = vec![false; self.width];
            for &b in &self.basis {
                basic[b] = true;
            }
            for j in 0..self.width {
                if !basic[j] && d[j] > LEX_TOL {
                    barred[j] = true;
                }
            }
        }
        Ok(objectives.iter().map(|c| self.value(c)).collect())
    }

    pub fn value(&self, c: &[f64]) -> f64 {
        self.primal().iter().zip(c).map(|(x, c)| x * c).sum()
    }

    pub fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n {
                x[b] = row[self.width].clamp(0.0, 1.0);
            }
        }
        x
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb != 0.0 {
                for j in 0..self.width {
                    d[j] -= cb * row[j];
                }
            }
        }
        d
    }

    fn optimize(&mut self, cost: &[f64], barred: &[bool]) -> Result<()> {
        let mut d = self.reduced_costs(cost);
        let mut degenerate = 0usize;
        let mut pivots = 0usize;
        loop {
            let bland = degenerate >= BLAND_AFTER;
            let entering = if bland {
                (0..self.width).find(|&j| !barred[j] && d[j] < -EPS)
            } else {
                (0..self.width)
                    .filter(|&j| !barred[j] && d[j] < -EPS)
                    .min_by(|&a, &b| d[a].total_cmp(&d[b]))
            };
            let Some(q) = entering else {
                return Ok(());
            };

            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[q];
                if a <= EPS {
                    continue;
                }
                let ratio = row[self.width].max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        let better = if ratio < best - 1e-12 {
                            true
                        } else if ratio <= best + 1e-12 {
                            if bland {
                                self.basis[i] < self.basis[r]
                            } else {
                                a > self.rows[r][q]
                            }
                        } else {
                            false
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Err(Error::Unbounded);
            };
            if ratio <= EPS {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
            let f = d[q];
            if f != 0.0 {
                let row = &self.rows[r];
                for j in 0..self.width {
                    d[j] -= f * row[j];
                }
            }
            d[q] = 0.0;
            pivots += 1;
            if pivots > MAX_PIVOTS {
                return Err(Error::IterationLimit);
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        count_pivot();
        let w = self.width;
        let piv = self.rows[r][q];
        {
            let row = &mut self.rows[r];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[q] = 1.0;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            if f == 0.0 {
                continue;
            }
            for j in 0..=w {
                row[j] -= f * pivot_row[j];
            }
            row[q] = 0.0;
            if row[w] < 0.0 && row[w] > -1e-11 {
                row[w] = 0.0;
            }
        }
        self.basis[r] = q;
    }
}
