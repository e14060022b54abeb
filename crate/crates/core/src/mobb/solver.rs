//! The branch-and-bound loop.

use super::config::SolverConfig;
use super::node::{Node, NodeQueue};
use super::rules::{choose_branch_variable, level_cut, prune_redundant_cuts, slb_weight};
use super::stats::{FathomCause, SolveStats, TraceEvent};
use crate::bounds::{
    dominance_fathom, gap_over, GapMeasure, IncumbentList, LocalUpperBoundSet,
    LowerBoundSet,
};
use crate::clock::{Deadline, Stopwatch};
use crate::error::Result;
use crate::ipsolve::{solve_econstraint, solve_weighted_sum_ip, ScalarStatus, TimeLimit};
use crate::lp::{initial_weights, lower_bound_frontier, Cut, FrontierMode, RelaxedSubproblem};
use crate::model::{enumerate_nondominated, Fixings, Instance, Solution, DEFAULT_ENUMERATION_CAP};

const INTEGRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SolveOutput {
    /// One solution per nondominated point, sorted by image.
    pub solutions: Vec<Solution>,
    pub stats: SolveStats,
    /// Events recorded when `record_trace` is set.
    pub trace: Vec<TraceEvent>,
    /// Every cut stored during the run, root and local.
    pub cuts: Vec<StoredCut>,
}

/// A cut together with the fixings of the subtree it was derived for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredCut {
    pub cut: Cut,
    pub scope: Fixings,
}

impl SolveOutput {
    pub fn points(&self) -> Vec<Vec<i64>> {
        self.solutions.iter().map(|s| s.image().to_vec()).collect()
    }
}

/// Enumerate the nondominated set of `instance`.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<SolveOutput> {
    config.validate(instance.p())?;
    Solver::new(instance, config).run()
}

enum Bound {
    Infeasible,
    Lower(LowerBoundSet),
}

struct Solver<'a> {
    inst: &'a Instance,
    cfg: &'a SolverConfig,
    incumbents: IncumbentList,
    lubs: LocalUpperBoundSet,
    stats: SolveStats,
    trace: Vec<TraceEvent>,
    cuts: Vec<StoredCut>,
    watch: Stopwatch,
    deadline: Deadline,
    queue: NodeQueue,
    iteration: usize,
    next_id: usize,
    mode: FrontierMode,
}

impl<'a> Solver<'a> {
    fn new(inst: &'a Instance, cfg: &'a SolverConfig) -> Self {
        let m = cfg.big_m.unwrap_or_else(|| inst.big_m());
        Solver {
            inst,
            cfg,
            incumbents: IncumbentList::new(),
            lubs: LocalUpperBoundSet::new(inst.p(), m),
            stats: SolveStats::default(),
            trace: Vec::new(),
            cuts: Vec::new(),
            watch: Stopwatch::start(cfg.clock),
            deadline: Deadline::new(cfg.clock, cfg.time_limit),
            queue: NodeQueue::new(cfg.node_selection),
            iteration: 0,
            next_id: 1,
            mode: FrontierMode::for_objectives(inst.p()),
        }
    }

    fn record(&mut self, event: TraceEvent) {
        if self.cfg.record_trace {
            self.trace.push(event);
        }
    }

    /// IP budget: `secs` capped by what is left of the global limit.
    fn ip_limit(&self, secs: Option<f64>) -> TimeLimit {
        let secs = match (secs, self.deadline.remaining()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        TimeLimit::new(self.cfg.clock, secs)
    }

    fn offer(&mut self, x: Vec<u8>) {
        let image = self.inst.image_unchecked(&x);
        let sol = Solution::with_image_unchecked(x, image);
        let image = sol.image().to_vec();
        if self.incumbents.update(sol).accepted {
            self.lubs.update(&image);
        }
    }

    fn run(mut self) -> Result<SolveOutput> {
        let root_cuts = if self.cfg.warmstart { self.warmstart()? } else { Vec::new() };
        self.queue.push(Node::root(self.inst.n(), root_cuts));

        let mut complete = true;
        while !self.queue.is_empty() {
            let over_nodes = self
                .cfg
                .node_limit
                .is_some_and(|l| self.stats.nodes_explored >= l);
            // The root is always explored, so every run reports a node.
            let out_of_time = self.iteration > 0 && self.deadline.expired();
            if over_nodes || out_of_time {
                complete = false;
                break;
            }
            let node = self.queue.select()?;
            self.iteration += 1;
            self.stats.nodes_explored += 1;
            self.record(TraceEvent::NodeSelected {
                iteration: self.iteration,
                node: node.id,
                depth: node.depth(),
                free: node.fixings.free_count(),
            });
            self.process(node)?;
        }
        self.stats.solved_to_completion = complete;
        self.stats.wall_time = self.watch.elapsed();
        Ok(SolveOutput {
            solutions: self.incumbents.into_sorted(),
            stats: self.stats,
            trace: self.trace,
            cuts: self.cuts,
        })
    }

    fn warmstart(&mut self) -> Result<Vec<Cut>> {
        let mut root_cuts = Vec::new();
        let sub = RelaxedSubproblem::root(self.inst);
        for w in initial_weights(self.inst.p()) {
            if self.deadline.expired() {
                break;
            }
            let (res, level) = solve_weighted_sum_ip(&sub, &w, self.ip_limit(None))?;
            self.stats.ip_scalarizations += res.ip_solves;
            if let Some(x) = res.solution {
                self.offer(x);
            }
            if let Some(cut) = level.and_then(|h| level_cut(self.inst, &h)) {
                if !root_cuts.contains(&cut) {
                    self.cuts.push(StoredCut {
                        cut: cut.clone(),
                        scope: Fixings::none(self.inst.n()),
                    });
                    root_cuts.push(cut);
                }
            }
        }
        Ok(root_cuts)
    }

    fn fathom(&mut self, node: &Node, cause: FathomCause) {
        match cause {
            FathomCause::Infeasible => self.stats.fathomed_infeasible += 1,
            FathomCause::Optimal => self.stats.fathomed_optimal += 1,
            FathomCause::Dominance => self.stats.fathomed_dominance += 1,
            FathomCause::Enumerated => self.stats.enumerated += 1,
        }
        if self.cfg.record_trace {
            self.trace.push(TraceEvent::Fathomed {
                node: node.id,
                fixings: node.fixings.clone(),
                cause,
            });
        }
    }

    fn ec_due(&self) -> bool {
        let n = self.inst.n();
        self.cfg.ec_enabled && self.iteration.is_multiple_of(n) && self.iteration <= self.inst.p() * n * n
    }

    fn process(&mut self, mut node: Node) -> Result<()> {
        let free = node.fixings.free_count();
        if self.cfg.te_enabled && free <= self.cfg.te_threshold {
            self.record(TraceEvent::Te {
                iteration: self.iteration,
                free,
            });
            if self.ec_due() {
                self.record(TraceEvent::EcDue {
                    iteration: self.iteration,
                    performed: false,
                });
            }
            for s in enumerate_nondominated(self.inst, &node.fixings, DEFAULT_ENUMERATION_CAP)? {
                self.offer(s.x().to_vec());
            }
            self.fathom(&node, FathomCause::Enumerated);
            return Ok(());
        }

        // Lower bound.
        let depth = node.depth();
        let use_slb = self.cfg.slb_enabled
            && depth >= self.cfg.slb_level
            && depth.is_multiple_of(self.cfg.slb_level)
            && node.parent_facets.is_some();
        let bound = if use_slb {
            self.simple_lower_bound(&mut node)?
        } else {
            self.full_lower_bound(&node)?
        };

        if self.ec_due() {
            let performed = match &bound {
                Bound::Lower(l) => self.ec_step(l)?,
                Bound::Infeasible => false,
            };
            self.record(TraceEvent::EcDue {
                iteration: self.iteration,
                performed,
            });
        }

        let lower = match bound {
            Bound::Infeasible => {
                self.fathom(&node, FathomCause::Infeasible);
                return Ok(());
            }
            Bound::Lower(l) => l,
        };

        // Integer extreme solutions update the upper bound.
        for x in &lower.extreme_solutions {
            if x.iter().all(|v| (v - v.round()).abs() <= INTEGRAL_TOL) {
                let xi: Vec<u8> = x.iter().map(|v| v.round() as u8).collect();
                if self.inst.feasible_unchecked(&xi) {
                    self.offer(xi);
                }
            }
        }
        prune_redundant_cuts(&mut node.cuts, &lower.extreme_solutions);

        // Fathoming.
        if let Some(y) = lower.single_point() {
            let yi: Vec<i64> = y.iter().map(|v| v.round() as i64).collect();
            let integral = y.iter().zip(&yi).all(|(a, &b)| (a - b as f64).abs() <= INTEGRAL_TOL);
            if integral && self.incumbents.contains_image(&yi) {
                self.fathom(&node, FathomCause::Optimal);
                return Ok(());
            }
        }
        let check = dominance_fathom(&lower, self.lubs.as_slice(), self.cfg.integral_strengthening);
        if check.fathom {
            self.fathom(&node, FathomCause::Dominance);
            return Ok(());
        }
        if free == 0 {
            // A fully fixed node holds a single point, offered above.
            let x: Vec<u8> = node.fixings.as_slice().iter().map(|v| v.unwrap_or(0)).collect();
            let cause = if self.incumbents.contains_image(&self.inst.image_unchecked(&x)) {
                FathomCause::Optimal
            } else {
                FathomCause::Dominance
            };
            self.fathom(&node, cause);
            return Ok(());
        }
        if let Some(measure) = self.cfg.node_selection.gap_measure() {
            node.gap = gap_over(&lower, &check.surviving, measure).0;
        }

        // Branching.
        let j = choose_branch_variable(self.inst, &node.fixings, &lower, self.cfg.branching)?;
        let ids = [self.next_id, self.next_id + 1];
        self.next_id += 2;
        self.stats.branched += 1;
        self.record(TraceEvent::Branched {
            node: node.id,
            variable: j,
            children: ids,
        });
        for (v, id) in [0u8, 1u8].into_iter().zip(ids) {
            self.queue.push(Node {
                id,
                parent: Some(node.id),
                fixings: node.fixings.with(j, v),
                gap: node.gap,
                parent_facets: Some(lower.facet_offsets.clone()),
                parent_surviving: check.surviving.clone(),
                cuts: node.cuts.clone(),
            });
        }
        Ok(())
    }

    fn full_lower_bound(&mut self, node: &Node) -> Result<Bound> {
        let sub = RelaxedSubproblem::new(self.inst, node.fixings.clone(), node.cuts.clone());
        let watch = Stopwatch::start(self.cfg.clock);
        let lower = lower_bound_frontier(&sub, self.mode, &self.cfg.frontier)?;
        if node.parent.is_none() {
            self.stats.root_lb_time = watch.elapsed();
        }
        Ok(match lower {
            Some(l) => Bound::Lower(l),
            None => Bound::Infeasible,
        })
    }

    fn simple_lower_bound(&mut self, node: &mut Node) -> Result<Bound> {
        self.record(TraceEvent::Slb {
            iteration: self.iteration,
            depth: node.depth(),
        });
        let p = self.inst.p();
        let facets = node.parent_facets.clone().unwrap_or_else(|| vec![f64::NEG_INFINITY; p]);
        let weights = slb_weight(&node.parent_surviving, p);
        let sub = RelaxedSubproblem::new(self.inst, node.fixings.clone(), node.cuts.clone());
        let limit = self.ip_limit(Some(self.stats.root_lb_time / 10.0));
        let (res, level) = solve_weighted_sum_ip(&sub, &weights, limit)?;
        self.stats.ip_scalarizations += res.ip_solves;
        Ok(match res.status {
            ScalarStatus::Infeasible => Bound::Infeasible,
            ScalarStatus::NoSolutionTimeout => Bound::Lower(LowerBoundSet::simple(None, facets, None)),
            ScalarStatus::Optimal | ScalarStatus::FeasibleTimeout => {
                let x = res.solution.expect("status carries a solution");
                let point = (
                    self.inst.image_unchecked(&x).iter().map(|&v| v as f64).collect(),
                    x.iter().map(|&v| v as f64).collect(),
                );
                self.offer(x);
                if let Some(cut) = level.as_ref().and_then(|h| level_cut(self.inst, h)) {
                    if !node.cuts.contains(&cut) {
                        self.cuts.push(StoredCut {
                            cut: cut.clone(),
                            scope: node.fixings.clone(),
                        });
                        node.cuts.push(cut);
                    }
                }
                Bound::Lower(LowerBoundSet::simple(level, facets, Some(point)))
            }
        })
    }

    /// ε-constraint scalarization of the root, with ε taken from the lub
    /// attaining the node's gap. Returns whether a scalarization ran.
    fn ec_step(&mut self, lower: &LowerBoundSet) -> Result<bool> {
        let check = dominance_fathom(lower, self.lubs.as_slice(), self.cfg.integral_strengthening);
        let measure = self.cfg.node_selection.gap_measure().unwrap_or(GapMeasure::Hsz);
        let (_, idx) = gap_over(lower, &check.surviving, measure);
        let Some(idx) = idx else {
            return Ok(false);
        };
        let eps: Vec<f64> = check.surviving[idx].iter().map(|&u| (u - 1) as f64).collect();
        let root = RelaxedSubproblem::root(self.inst);
        let res = solve_econstraint(&root, self.cfg.ec_objective, &eps, self.ip_limit(None))?;
        self.stats.ip_scalarizations += res.ip_solves;
        if let Some(x) = res.solution {
            self.offer(x);
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobb::config::{Approach, Branching, NodeSelection};
    use crate::model::Sense;

    fn kp() -> Instance {
        Instance::new("kp", "KP", vec![vec![-3, -1], vec![-1, -3]], vec![vec![1, 1]], vec![1], vec![Sense::Le]).unwrap()
    }

    #[test]
    fn two_item_knapsack_under_every_approach() {
        let inst = kp();
        for a in Approach::matrix() {
            let out = solve(&inst, &a.config(crate::bounds::GapMeasure::Lhg)).unwrap();
            assert_eq!(out.points(), vec![vec![-3, -1], vec![-1, -3]], "{}", a.label());
            assert!(out.stats.solved_to_completion);
        }
    }

    #[test]
    fn infeasible_instance_is_solved_empty() {
        let inst = Instance::new("i", "t", vec![vec![1, 1], vec![1, 1]], vec![vec![1, 1]], vec![-1], vec![Sense::Le]).unwrap();
        let cfg = SolverConfig {
            warmstart: true,
            ..SolverConfig::default()
        };
        let out = solve(&inst, &cfg).unwrap();
        assert!(out.solutions.is_empty());
        assert!(out.stats.solved_to_completion);
        assert_eq!(out.stats.fathomed_infeasible, 1);
    }

    #[test]
    fn warmstart_finds_the_knapsack_frontier_up_front() {
        let inst = kp();
        let cfg = SolverConfig {
            warmstart: true,
            record_trace: true,
            ..SolverConfig::default()
        };
        let out = solve(&inst, &cfg).unwrap();
        assert_eq!(out.stats.ip_scalarizations, 3);
        assert_eq!(out.points().len(), 2);
    }

    #[test]
    fn counters_add_up() {
        let inst = Instance::new(
            "kp6",
            "KP",
            vec![vec![-7, -3, -9, -4, -6, -5], vec![-2, -8, -1, -6, -3, -7], vec![-5, -5, -2, -1, -8, -3]],
            vec![vec![4, 3, 5, 2, 6, 3]],
            vec![11],
            vec![Sense::Le],
        )
        .unwrap();
        let oracle = enumerate_nondominated(&inst, &Fixings::none(6), 25).unwrap();
        let oracle: Vec<Vec<i64>> = oracle.iter().map(|s| s.image().to_vec()).collect();
        for sel in [NodeSelection::DepthFirst, NodeSelection::BreadthFirst, NodeSelection::Lhg, NodeSelection::Hsz] {
            for branching in [Branching::MostOftenFractional, Branching::SumOfRatios] {
                let cfg = SolverConfig {
                    node_selection: sel,
                    branching,
                    ..SolverConfig::default()
                };
                let out = solve(&inst, &cfg).unwrap();
                let s = &out.stats;
                assert_eq!(s.nodes_explored, s.fathomed_total() + s.branched);
                assert_eq!(out.points(), oracle);
            }
        }
    }

    #[test]
    fn node_limit_stops_early() {
        let inst = kp();
        let cfg = SolverConfig {
            node_limit: Some(0),
            ..SolverConfig::default()
        };
        let out = solve(&inst, &cfg).unwrap();
        assert!(!out.stats.solved_to_completion);
        assert_eq!(out.stats.nodes_explored, 0);
    }

    #[test]
    fn an_expired_limit_still_explores_the_root() {
        let cfg = SolverConfig {
            time_limit: Some(0.0),
            warmstart: true,
            ..SolverConfig::default()
        };
        let out = solve(&kp(), &cfg).unwrap();
        assert_eq!(out.stats.nodes_explored, 1);
        assert!(!out.stats.solved_to_completion);
    }
}
