//! Fixed instances shared by the benchmarks.

use mobb_core::instances::{generate, GeneratorSpec};
use mobb_core::mobb::{default_measure, Approach, SolverConfig};
use mobb_core::{ClockMode, Instance};

pub fn knapsack(p: usize, n: usize) -> Instance {
    generate(&GeneratorSpec::kp(p, n, 42)).expect("fixed spec is valid")
}

pub fn assignment(p: usize, agents: usize, jobs: usize) -> Instance {
    generate(&GeneratorSpec::gap(p, agents, jobs, 42)).expect("fixed spec is valid")
}

/// Configuration of `approach` on `inst`, timed by pivot counts.
pub fn config(approach: Approach, inst: &Instance) -> SolverConfig {
    SolverConfig {
        clock: ClockMode::Work,
        ..approach.config(default_measure(inst.problem()))
    }
}

/// Pseudo-random points on a simplex-like front, for upper bound updates.
pub fn front_points(p: usize, count: usize) -> Vec<Vec<i64>> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    (0..count)
        .map(|_| {
            let mut y: Vec<i64> = (0..p - 1).map(|_| (next() % 1000) as i64).collect();
            let used: i64 = y.iter().sum();
            y.push((1000 * (p as i64 - 1) - used).max(0));
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_the_requested_shape() {
        assert_eq!(knapsack(3, 20).n(), 20);
        assert_eq!(assignment(2, 3, 4).n(), 12);
        let pts = front_points(3, 10);
        assert_eq!(pts.len(), 10);
        assert!(pts.iter().all(|y| y.len() == 3 && y.iter().sum::<i64>() >= 2000));
    }
}
