use crate::model::{weakly_dominates, Solution};

/// Global upper bound set: mutually nondominated images, one solution each.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IncumbentList {
    entries: Vec<Solution>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncumbentUpdate {
    pub accepted: bool,
    pub removed: Vec<Solution>,
}

impl IncumbentList {
    pub fn new() -> Self {
        IncumbentList::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Solution] {
        &self.entries
    }

    pub fn images(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.iter().map(Solution::image)
    }

    pub fn contains_image(&self, y: &[i64]) -> bool {
        self.images().any(|z| z == y)
    }

    /// Whether some incumbent weakly dominates `y`.
    pub fn covers(&self, y: &[i64]) -> bool {
        self.images().any(|z| weakly_dominates(z, y))
    }

    /// Insert `candidate` unless an incumbent weakly dominates it; drop
    /// every incumbent it dominates.
    pub fn update(&mut self, candidate: Solution) -> IncumbentUpdate {
        if self.covers(candidate.image()) {
            return IncumbentUpdate {
                accepted: false,
                removed: Vec::new(),
            };
        }
        let (removed, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut self.entries)
            .into_iter()
            .partition(|s| weakly_dominates(candidate.image(), s.image()));
        self.entries = kept;
        self.entries.push(candidate);
        IncumbentUpdate {
            accepted: true,
            removed,
        }
    }

    /// Entries sorted lexicographically by image.
    pub fn into_sorted(mut self) -> Vec<Solution> {
        self.entries.sort_by(|a, b| a.image().cmp(b.image()));
        self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dominates;

    fn sol(y: [i64; 2]) -> Solution {
        Solution::with_image_unchecked(vec![0, 0], y.to_vec())
    }

    fn images(u: &IncumbentList) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = u.images().map(<[i64]>::to_vec).collect();
        v.sort();
        v
    }

    fn base() -> IncumbentList {
        let mut u = IncumbentList::new();
        u.update(sol([2, 9]));
        u.update(sol([6, 7]));
        u
    }

    #[test]
    fn duplicate_is_rejected() {
        let mut u = base();
        let r = u.update(sol([6, 7]));
        assert!(!r.accepted && r.removed.is_empty());
        assert_eq!(images(&u), vec![vec![2, 9], vec![6, 7]]);
    }

    #[test]
    fn incomparable_is_added() {
        let mut u = base();
        assert!(u.update(sol([5, 8])).accepted);
        assert_eq!(images(&u), vec![vec![2, 9], vec![5, 8], vec![6, 7]]);
    }

    #[test]
    fn dominating_point_clears_list() {
        let mut u = base();
        let r = u.update(sol([1, 1]));
        assert!(r.accepted);
        assert_eq!(r.removed.len(), 2);
        assert_eq!(images(&u), vec![vec![1, 1]]);
    }

    #[test]
    fn entries_stay_mutually_nondominated() {
        let mut u = IncumbentList::new();
        for y in [[5, 5], [4, 6], [6, 4], [4, 5], [3, 9], [9, 3], [3, 3]] {
            u.update(sol(y));
            for a in u.images() {
                for b in u.images() {
                    assert!(!dominates(a, b));
                }
            }
        }
        assert_eq!(images(&u), vec![vec![3, 3]]);
    }
}
