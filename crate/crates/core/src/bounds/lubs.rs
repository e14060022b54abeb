use crate::model::{strictly_dominates, weakly_dominates};

/// Corner points of the search region left open by an incumbent list,
/// bounded by the box `(-inf, M]^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUpperBoundSet {
    m: i64,
    lubs: Vec<Vec<i64>>,
}

impl LocalUpperBoundSet {
    /// The set `{(M, ..., M)}` of an empty incumbent list.
    pub fn new(p: usize, m: i64) -> Self {
        LocalUpperBoundSet {
            m,
            lubs: vec![vec![m; p]],
        }
    }

    pub fn big_m(&self) -> i64 {
        self.m
    }

    pub fn as_slice(&self) -> &[Vec<i64>] {
        &self.lubs
    }

    pub fn len(&self) -> usize {
        self.lubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lubs.is_empty()
    }

    /// Incorporate a newly accepted incumbent image `z`.
    ///
    /// Each lub strictly above `z` is split into its `p` children
    /// `(u_1, .., z_k, .., u_p)`; children whose box is covered by another
    /// lub's box are dropped.
    pub fn update(&mut self, z: &[i64]) {
        let (hit, mut kept): (Vec<_>, Vec<_>) = std::mem::take(&mut self.lubs)
            .into_iter()
            .partition(|u| strictly_dominates(z, u));
        if hit.is_empty() {
            self.lubs = kept;
            return;
        }
        let mut children: Vec<Vec<i64>> = Vec::with_capacity(hit.len() * z.len());
        for u in &hit {
            for k in 0..z.len() {
                let mut c = u.clone();
                c[k] = z[k];
                children.push(c);
            }
        }
        children.sort();
        children.dedup();
        let survivors: Vec<Vec<i64>> = children
            .iter()
            .filter(|c| {
                !children.iter().chain(kept.iter()).any(|o| o != *c && weakly_dominates(c, o))
            })
            .cloned()
            .collect();
        kept.extend(survivors);
        kept.sort();
        kept.dedup();
        self.lubs = kept;
    }

    /// Set for a whole incumbent list, built by sequential insertion.
    pub fn from_points<'a>(p: usize, m: i64, points: impl IntoIterator<Item = &'a [i64]>) -> Self {
        let mut k = LocalUpperBoundSet::new(p, m);
        for z in points {
            k.update(z);
        }
        k
    }
}
