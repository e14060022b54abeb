//! Outer approximation of the dual of a multi-objective LP in weight space.
//!
//! Points are `(w_1, .., w_{p-1}, r)` with the full weight vector
//! `(w_1, .., w_{p-1}, 1 - sum w)`. The polytope starts as the weight
//! simplex times `[r_low, r_high]`; every objective point `y` found adds the
//! cut `r <= w · y`. Vertices are kept by incremental double description,
//! with tight constraint sets stored as bitmasks.

const TIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct Vertex {
    pub coords: Vec<f64>,
    tight: u128,
    pub verified: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct WeightSpace {
    p: usize,
    constraints: Vec<(Vec<f64>, f64)>,
    vertices: Vec<Vertex>,
    r_low: f64,
}

impl WeightSpace {
    pub fn new(p: usize, r_low: f64, r_high: f64) -> Self {
        assert!(p >= 2 && p + 2 < 128);
        let d = p;
        let mut constraints = Vec::new();
        for i in 0..p - 1 {
            let mut a = vec![0.0; d];
            a[i] = -1.0;
            constraints.push((a, 0.0));
        }
        let mut a = vec![1.0; d];
        a[d - 1] = 0.0;
        constraints.push((a, 1.0));
        let mut a = vec![0.0; d];
        a[d - 1] = -1.0;
        constraints.push((a, -r_low));
        let mut a = vec![0.0; d];
        a[d - 1] = 1.0;
        constraints.push((a, r_high));

        let mut ws = WeightSpace {
            p,
            constraints,
            vertices: Vec::new(),
            r_low,
        };
        for corner in 0..p {
            for r in [r_low, r_high] {
                let mut coords = vec![0.0; d];
                if corner < p - 1 {
                    coords[corner] = 1.0;
                }
                coords[d - 1] = r;
                let tight = ws.tight_set(&coords);
                ws.vertices.push(Vertex {
                    coords,
                    tight,
                    verified: false,
                });
            }
        }
        ws
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Full weight vector of a vertex.
    pub fn weights(&self, v: &Vertex) -> Vec<f64> {
        let mut w: Vec<f64> = v.coords[..self.p - 1].iter().map(|x| x.max(0.0)).collect();
        let last = (1.0 - w.iter().sum::<f64>()).max(0.0);
        w.push(last);
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    }

    pub fn level(&self, v: &Vertex) -> f64 {
        v.coords[self.p - 1]
    }

    pub fn is_bottom(&self, v: &Vertex) -> bool {
        v.coords[self.p - 1] <= self.r_low + TIGHT_TOL * (1.0 + self.r_low.abs())
    }

    /// True if the vertex sits on a unit weight.
    pub fn is_corner(&self, v: &Vertex) -> bool {
        self.weights(v).iter().any(|&w| w >= 1.0 - 1e-12)
    }

    pub fn mark_verified(&mut self, idx: usize) {
        self.vertices[idx].verified = true;
    }

    fn slack(&self, c: usize, x: &[f64]) -> f64 {
        let (a, b) = &self.constraints[c];
        a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() - b
    }

    fn tol(&self, c: usize) -> f64 {
        let (a, b) = &self.constraints[c];
        let scale = a.iter().fold(b.abs(), |m, v| m.max(v.abs()));
        TIGHT_TOL * (1.0 + scale)
    }

    fn tight_set(&self, x: &[f64]) -> u128 {
        let mut mask = 0u128;
        for c in 0..self.constraints.len() {
            if self.slack(c, x).abs() <= self.tol(c) {
                mask |= 1 << c;
            }
        }
        mask
    }

    /// Add the cut `r <= w · y`. Returns false when it cuts off nothing or
    /// the constraint capacity is exhausted.
    pub fn add_point(&mut self, y: &[f64]) -> bool {
        let d = self.p;
        if self.constraints.len() >= 128 {
            return false;
        }
        let last = y[d - 1];
        let mut a: Vec<f64> = y[..d - 1].iter().map(|v| -(v - last)).collect();
        a.push(1.0);
        self.constraints.push((a, last));
        let c = self.constraints.len() - 1;
        let bit = 1u128 << c;
        let tol = self.tol(c);

        let slacks: Vec<f64> = self.vertices.iter().map(|v| self.slack(c, &v.coords)).collect();
        let outside: Vec<usize> = (0..slacks.len()).filter(|&i| slacks[i] > tol).collect();
        if outside.is_empty() {
            self.constraints.pop();
            return false;
        }
        let inside: Vec<usize> = (0..slacks.len()).filter(|&i| slacks[i] < -tol).collect();

        let mut created: Vec<Vertex> = Vec::new();
        for &i in &inside {
            for &o in &outside {
                let common = self.vertices[i].tight & self.vertices[o].tight;
                if (common.count_ones() as usize) < d - 1 {
                    continue;
                }
                let adjacent = self
                    .vertices
                    .iter()
                    .enumerate()
                    .all(|(k, w)| k == i || k == o || common & !w.tight != 0);
                if !adjacent {
                    continue;
                }
                let (si, so) = (slacks[i], slacks[o]);
                let t = si / (si - so);
                let coords: Vec<f64> = self.vertices[i]
                    .coords
                    .iter()
                    .zip(&self.vertices[o].coords)
                    .map(|(a, b)| a + t * (b - a))
                    .collect();
                let tight = common | bit;
                if let Some(existing) = created
                    .iter_mut()
                    .find(|v| v.coords.iter().zip(&coords).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs())))
                {
                    existing.tight |= tight;
                } else {
                    created.push(Vertex {
                        coords,
                        tight,
                        verified: false,
                    });
                }
            }
        }
        let mut keep = Vec::with_capacity(self.vertices.len() - outside.len() + created.len());
        for (i, mut v) in std::mem::take(&mut self.vertices).into_iter().enumerate() {
            if slacks[i] > tol {
                continue;
            }
            if slacks[i] >= -tol {
                v.tight |= bit;
            }
            keep.push(v);
        }
        keep.extend(created);
        self.vertices = keep;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_prism_has_two_p_vertices() {
        let ws = WeightSpace::new(3, -10.0, 10.0);
        assert_eq!(ws.vertices().len(), 6);
        for v in ws.vertices() {
            assert_eq!(v.tight.count_ones(), 3);
        }
    }

    #[test]
    fn single_point_cut_leaves_the_graph_of_a_linear_function() {
        // r <= w · (1, 2, 3): the top face becomes the plane through the
        // three corners at heights 1, 2, 3.
        let mut ws = WeightSpace::new(3, -10.0, 10.0);
        assert!(ws.add_point(&[1.0, 2.0, 3.0]));
        let mut tops: Vec<(Vec<f64>, f64)> = ws
            .vertices()
            .iter()
            .filter(|v| !ws.is_bottom(v))
            .map(|v| (ws.weights(v), ws.level(v)))
            .collect();
        tops.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert_eq!(tops.len(), 3);
        for (k, (w, r)) in tops.iter().enumerate() {
            assert!((w[k] - 1.0).abs() < 1e-12);
            assert!((r - (k as f64 + 1.0)).abs() < 1e-12);
        }
        assert!(!ws.add_point(&[5.0, 5.0, 5.0]));
    }

    #[test]
    fn two_cuts_create_a_ridge() {
        let mut ws = WeightSpace::new(3, -10.0, 10.0);
        ws.add_point(&[0.0, 4.0, 4.0]);
        ws.add_point(&[4.0, 0.0, 4.0]);
        let tops: Vec<&Vertex> = ws.vertices().iter().filter(|v| !ws.is_bottom(v)).collect();
        // Corners at heights 0, 0, 4 plus the ridge end w = (0.5, 0.5, 0), r = 2.
        for v in &tops {
            let w = ws.weights(v);
            let r = ws.level(v);
            let f = (w[1] * 4.0 + w[2] * 4.0).min(w[0] * 4.0 + w[2] * 4.0);
            assert!((r - f).abs() < 1e-9);
        }
        assert_eq!(tops.len(), 4);
    }
}
