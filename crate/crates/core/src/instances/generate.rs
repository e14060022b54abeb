use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, Sense};

const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Kp,
    Uflp,
    Cflp,
    Gap,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Kp, Family::Uflp, Family::Cflp, Family::Gap];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Kp => "KP",
            Family::Uflp => "UFLP",
            Family::Cflp => "CFLP",
            Family::Gap => "GAP",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown family `{s}`")))
    }
}

/// Parameters of a random instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub p: usize,
    /// `(items, 1)` for KP, `(facilities, customers)` for UFLP and CFLP,
    /// `(agents, jobs)` for GAP.
    pub size: (usize, usize),
    /// Inclusive range of profits and costs.
    pub cost_range: (i64, i64),
    /// Inclusive range of weights and demands.
    pub weight_range: (i64, i64),
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, p: usize, size: (usize, usize), seed: u64) -> Self {
        GeneratorSpec {
            family,
            p,
            size,
            cost_range: (1, 100),
            weight_range: (1, 50),
            seed,
        }
    }

    pub fn kp(p: usize, items: usize, seed: u64) -> Self {
        Self::new(Family::Kp, p, (items, 1), seed)
    }

    pub fn uflp(p: usize, facilities: usize, customers: usize, seed: u64) -> Self {
        Self::new(Family::Uflp, p, (facilities, customers), seed)
    }

    pub fn cflp(p: usize, facilities: usize, customers: usize, seed: u64) -> Self {
        Self::new(Family::Cflp, p, (facilities, customers), seed)
    }

    pub fn gap(p: usize, agents: usize, jobs: usize, seed: u64) -> Self {
        Self::new(Family::Gap, p, (agents, jobs), seed)
    }

    /// Number of binary variables of the generated instance.
    pub fn variables(&self) -> usize {
        let (a, b) = self.size;
        match self.family {
            Family::Kp => a,
            Family::Uflp | Family::Cflp => a + a * b,
            Family::Gap => a * b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.p < 2 {
            return bad(format!("need at least 2 objectives, got {}", self.p));
        }
        if self.size.0 == 0 || self.size.1 == 0 {
            return bad(format!("sizes must be positive, got {:?}", self.size));
        }
        for (name, (lo, hi)) in [("cost", self.cost_range), ("weight", self.weight_range)] {
            if lo > hi {
                return bad(format!("{name} range is empty: [{lo}, {hi}]"));
            }
        }
        if self.weight_range.0 < 1 {
            return bad("weights must be positive".into());
        }
        Ok(())
    }

    fn name(&self) -> String {
        let (a, b) = self.size;
        let dims = match self.family {
            Family::Kp => format!("n{a}"),
            _ => format!("{a}x{b}"),
        };
        format!("{}-p{}-{}-s{}", self.family.as_str().to_lowercase(), self.p, dims, self.seed)
    }
}

/// Draw a random instance; the same spec always gives the same instance.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Kp => knapsack(spec, &mut rng),
        Family::Uflp => facility_location(spec, &mut rng, false),
        Family::Cflp => facility_location(spec, &mut rng, true),
        Family::Gap => assignment(spec, &mut rng),
    }
}

fn draws(rng: &mut ChaCha8Rng, (lo, hi): (i64, i64), count: usize) -> Vec<i64> {
    (0..count).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn knapsack(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let n = spec.size.0;
    let c: Vec<Vec<i64>> = (0..spec.p)
        .map(|_| draws(rng, spec.cost_range, n).into_iter().map(|v| -v).collect())
        .collect();
    let a = draws(rng, spec.weight_range, n);
    let cap = a.iter().sum::<i64>() / 2;
    Instance::new(spec.name(), "KP", c, vec![a], vec![cap], vec![Sense::Le])
}

/// Whether first-fit decreasing packs every demand into the capacities.
fn first_fit_decreasing(demands: &[i64], caps: &[i64]) -> bool {
    let mut order: Vec<i64> = demands.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    let mut left = caps.to_vec();
    order.iter().all(|&d| match left.iter_mut().find(|l| **l >= d) {
        Some(l) => {
            *l -= d;
            true
        }
        None => false,
    })
}

/// Facility `j` opens with `y_j` (index `j`); customer `i` is served by `j`
/// with `x_ij` (index `F + i·F + j`).
fn facility_location(spec: &GeneratorSpec, rng: &mut ChaCha8Rng, capacitated: bool) -> Result<Instance> {
    let (f, k) = spec.size;
    let n = f + f * k;
    let x = |i: usize, j: usize| f + i * f + j;
    let c: Vec<Vec<i64>> = (0..spec.p).map(|_| draws(rng, spec.cost_range, n)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut senses = Vec::new();
    for i in 0..k {
        let mut row = vec![0; n];
        for j in 0..f {
            row[x(i, j)] = 1;
        }
        rows.push(row);
        rhs.push(1);
        senses.push(Sense::Eq);
    }
    for i in 0..k {
        for j in 0..f {
            let mut row = vec![0; n];
            row[x(i, j)] = 1;
            row[j] = -1;
            rows.push(row);
            rhs.push(0);
            senses.push(Sense::Le);
        }
    }
    let family = if capacitated {
        let demands = draws(rng, spec.weight_range, k);
        let total: i64 = demands.iter().sum();
        let largest = *demands.iter().max().expect("customers are nonempty");
        let lo = ((3 * total + 2 * f as i64 - 1) / (2 * f as i64)).max(largest);
        let caps = (0..MAX_REDRAWS)
            .map(|_| draws(rng, (lo, 2 * lo), f))
            .find(|caps| first_fit_decreasing(&demands, caps))
            .ok_or_else(|| Error::InvalidConfig("could not draw feasible capacities".into()))?;
        for j in 0..f {
            let mut row = vec![0; n];
            for i in 0..k {
                row[x(i, j)] = demands[i];
            }
            row[j] = -caps[j];
            rows.push(row);
            rhs.push(0);
            senses.push(Sense::Le);
        }
        "CFLP"
    } else {
        "UFLP"
    };
    Instance::new(spec.name(), family, c, rows, rhs, senses)
}

/// Agent `i` takes job `j` with `x_ij` (index `i·J + j`).
fn assignment(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let (agents, jobs) = spec.size;
    let n = agents * jobs;
    let c: Vec<Vec<i64>> = (0..spec.p).map(|_| draws(rng, spec.cost_range, n)).collect();
    let mut drawn = None;
    for _ in 0..MAX_REDRAWS {
        let w: Vec<Vec<i64>> = (0..agents).map(|_| draws(rng, spec.weight_range, jobs)).collect();
        let caps: Vec<i64> = w
            .iter()
            .map(|r| {
                let share = 4 * r.iter().sum::<i64>() / (5 * agents as i64);
                share.max(*r.iter().max().expect("jobs are nonempty"))
            })
            .collect();
        if greedy_assignment(&w, &caps) {
            drawn = Some((w, caps));
            break;
        }
    }
    let (w, caps) = drawn.ok_or_else(|| Error::InvalidConfig("could not draw a feasible assignment".into()))?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut senses = Vec::new();
    for j in 0..jobs {
        let mut row = vec![0; n];
        for i in 0..agents {
            row[i * jobs + j] = 1;
        }
        rows.push(row);
        rhs.push(1);
        senses.push(Sense::Eq);
    }
    for i in 0..agents {
        let mut row = vec![0; n];
        row[i * jobs..(i + 1) * jobs].copy_from_slice(&w[i]);
        rows.push(row);
        rhs.push(caps[i]);
        senses.push(Sense::Le);
    }
    Instance::new(spec.name(), "GAP", c, rows, rhs, senses)
}

/// Jobs in decreasing order of their smallest weight, each to the agent
/// with the most remaining capacity among those that can take it.
fn greedy_assignment(w: &[Vec<i64>], caps: &[i64]) -> bool {
    let jobs = w[0].len();
    let mut order: Vec<usize> = (0..jobs).collect();
    let min_weight = |j: usize| w.iter().map(|r| r[j]).min().expect("agents are nonempty");
    order.sort_by_key(|&j| (std::cmp::Reverse(min_weight(j)), j));
    let mut left = caps.to_vec();
    for j in order {
        let best = (0..w.len())
            .filter(|&i| left[i] >= w[i][j])
            .max_by_key(|&i| (left[i] - w[i][j], std::cmp::Reverse(i)));
        match best {
            Some(i) => left[i] -= w[i][j],
            None => return false,
        }
    }
    true
}
