//! Acceptance suite. Each criterion prints one PASS or FAIL line; the
//! process exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use mobb_core::bounds::{hv_box_gap, hv_simplex_gap, spanning_points, GapMeasure, LocalUpperBoundSet, LowerBoundSet};
use mobb_core::clock::ClockMode;
use mobb_core::instances::{generate, write_instance, Family, GeneratorSpec};
use mobb_core::lp::{lower_bound_frontier, solve_weighted_lp, FrontierMode, FrontierOptions, RelaxedSubproblem};
use mobb_core::mobb::{
    default_measure, solve, Approach, ApproachBase, FathomCause, NodeSelection, SolveOutput, SolverConfig, TraceEvent,
};
use mobb_core::model::{enumerate_nondominated, weakly_dominates, Fixings, Instance};

type Outcome = Result<String, String>;

fn oracle(inst: &Instance, fixings: &Fixings) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = enumerate_nondominated(inst, fixings, 25)
        .expect("within the enumeration cap")
        .iter()
        .map(|s| s.image().to_vec())
        .collect();
    pts.sort();
    pts
}

/// The 150 equivalence instances: 50 per family, n between 10 and 14,
/// p cycling through 2, 3, 4.
fn equivalence_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for family in [Family::Kp, Family::Gap, Family::Uflp] {
        for k in 0..50u64 {
            let p = 2 + (k % 3) as usize;
            let size = match family {
                Family::Kp => (10 + (k % 5) as usize, 1),
                Family::Gap => [(2, 5), (2, 6), (3, 4), (2, 7)][(k % 4) as usize],
                _ => [(2, 4), (2, 5), (3, 3), (2, 6)][(k % 4) as usize],
            };
            out.push(generate(&GeneratorSpec::new(family, p, size, 1000 + k)).expect("valid spec"));
        }
    }
    out
}

struct Run {
    inst: Instance,
    approach: Approach,
    out: SolveOutput,
}

/// Criterion 1, keeping every run for criteria 3 and 4.
fn oracle_equivalence(runs: &mut Vec<Run>) -> Outcome {
    let started = Instant::now();
    let instances = equivalence_instances();
    let mut mismatches = Vec::new();
    for inst in instances {
        let expected = oracle(&inst, &Fixings::none(inst.n()));
        for approach in Approach::matrix() {
            let cfg = SolverConfig {
                record_trace: true,
                ..approach.config(default_measure(inst.problem()))
            };
            let out = solve(&inst, &cfg).map_err(|e| format!("{approach} on {}: {e}", inst.name()))?;
            if out.points() != expected || !out.stats.solved_to_completion {
                mismatches.push(format!("{approach} on {}", inst.name()));
            }
            runs.push(Run { inst: inst.clone(), approach, out });
        }
    }
    let secs = started.elapsed().as_secs_f64();
    if !mismatches.is_empty() {
        return Err(format!("{} runs differ from the oracle: {}", mismatches.len(), mismatches.join(", ")));
    }
    if secs >= 300.0 {
        return Err(format!("all {} runs exact but took {secs:.1}s (budget 300s)", runs.len()));
    }
    Ok(format!("{} runs (150 instances x 7 configs) equal the oracle, {secs:.1}s", runs.len()))
}

fn search_region_geometry() -> Outcome {
    let m = 1000;
    let incumbents = [[2, 9], [6, 7], [9, 5], [10, 1]];
    let lubs = LocalUpperBoundSet::from_points(2, m, incumbents.iter().map(|z| z.as_slice()));
    let interior: BTreeSet<Vec<i64>> = lubs.as_slice().iter().filter(|u| !u.contains(&m)).cloned().collect();
    let want: BTreeSet<Vec<i64>> = [vec![6, 9], vec![9, 7], vec![10, 5]].into_iter().collect();
    if interior != want {
        return Err(format!("interior lubs {interior:?}, expected {want:?}"));
    }
    let lower = LowerBoundSet::from_polyline(&[[1.0, 10.5], [1.5, 5.0], [3.0, 2.0], [8.0, 0.5]]);
    let lu = [6.0, 9.0];
    let ideal = lower.local_ideal().map_err(|e| e.to_string())?;
    let hb = hv_box_gap(&lu, &ideal);
    let span = spanning_points(&lower, &lu).map_err(|e| e.to_string())?;
    let hg = hv_simplex_gap(&lu, &span);
    // By hand: the box reaches down to (1, 0.5). Going left from lu at
    // height 9 meets the edge (1, 10.5)-(1.5, 5); going down at x = 6
    // meets the edge (3, 2)-(8, 0.5). The gap is the right triangle they
    // span with lu.
    let hb_hand = (6.0 - 1.0) * (9.0 - 0.5);
    let x_left = 1.0 + 0.5 * (10.5 - 9.0) / (10.5 - 5.0);
    let y_down = 2.0 - 1.5 * (6.0 - 3.0) / (8.0 - 3.0);
    let hg_hand = 0.5 * (6.0 - x_left) * (9.0 - y_down);
    if (hb - hb_hand).abs() > 1e-9 || (hg - hg_hand).abs() > 1e-9 || (hg - 19.211).abs() > 1e-3 {
        return Err(format!("hb {hb} (hand {hb_hand}), hg {hg} (hand {hg_hand})"));
    }
    Ok(format!("interior lubs {{(6,9),(9,7),(10,5)}}, hb = {hb}, hg = {hg:.9}"))
}

fn cut_validity(runs: &[Run]) -> Outcome {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for run in runs.iter().filter(|r| r.approach.base >= ApproachBase::Wst) {
        for stored in &run.out.cuts {
            for s in enumerate_nondominated(&run.inst, &stored.scope, 25).map_err(|e| e.to_string())? {
                checked += 1;
                if !stored.cut.holds_binary(s.x()) {
                    violations.push(format!("{} {}: {:?}", run.approach, run.inst.name(), s.image()));
                }
            }
        }
    }
    let cuts: usize = runs.iter().filter(|r| r.approach.base >= ApproachBase::Wst).map(|r| r.out.cuts.len()).sum();
    if !violations.is_empty() {
        return Err(format!("{} violations, first: {}", violations.len(), violations[0]));
    }
    if cuts == 0 {
        return Err("no cuts were stored, nothing checked".into());
    }
    Ok(format!("{cuts} stored cuts, {checked} point checks against their subtree frontiers, 0 violations"))
}

fn no_false_fathoming(runs: &[Run]) -> Outcome {
    let mut nodes = 0usize;
    let mut failures = Vec::new();
    for run in runs.iter().filter(|r| r.inst.n() <= 12) {
        let front = run.out.points();
        for ev in &run.out.trace {
            let TraceEvent::Fathomed { fixings, cause, node } = ev else { continue };
            if *cause == FathomCause::Enumerated {
                continue;
            }
            nodes += 1;
            let subtree = oracle(&run.inst, fixings);
            let lost = subtree.iter().find(|y| !front.iter().any(|f| weakly_dominates(f, y)));
            let wrong_infeasible = *cause == FathomCause::Infeasible && !subtree.is_empty();
            if lost.is_some() || wrong_infeasible {
                failures.push(format!("{} {} node {node} ({cause:?})", run.approach, run.inst.name()));
            }
        }
    }
    if !failures.is_empty() {
        return Err(format!("{} fathomed subtrees hold points off the frontier: {}", failures.len(), failures[0]));
    }
    Ok(format!("{nodes} fathomed nodes re-enumerated on n <= 12 instances, none hides a missed point"))
}

fn dichotomic_exactness() -> Outcome {
    let tol = 1e-9;
    let mut worst = 0.0f64;
    let mut facets = 0usize;
    for k in 0..100u64 {
        let family = [Family::Kp, Family::Gap, Family::Uflp, Family::Cflp][(k % 4) as usize];
        let size = match family {
            Family::Kp => (8 + (k % 13) as usize, 1),
            _ => (2 + (k % 2) as usize, 3 + (k % 3) as usize),
        };
        let inst = generate(&GeneratorSpec::new(family, 2, size, 5000 + k)).map_err(|e| e.to_string())?;
        let fixed: Vec<(usize, u8)> = (0..(k % 3) as usize).map(|j| (j * 2, ((k >> j) & 1) as u8)).collect();
        let fixings = Fixings::from_pairs(inst.n(), &fixed).map_err(|e| e.to_string())?;
        let sub = RelaxedSubproblem::new(&inst, fixings, vec![]);
        let Some(lower) = lower_bound_frontier(&sub, FrontierMode::Exact2D, &FrontierOptions::default())
            .map_err(|e| e.to_string())?
        else {
            continue;
        };
        for h in lower.halfspaces() {
            facets += 1;
            let best = solve_weighted_lp(&sub, &h.weights).map_err(|e| e.to_string())?.value;
            let on_facet = lower
                .extreme_points
                .iter()
                .map(|y| (h.value(y) - best).abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max((best - h.rhs).abs()).max(on_facet);
        }
        // Support function of the frontier against the relaxation itself.
        for t in 1..40 {
            let w = [t as f64 / 40.0, 1.0 - t as f64 / 40.0];
            let best = solve_weighted_lp(&sub, &w).map_err(|e| e.to_string())?.value;
            let support = lower
                .extreme_points
                .iter()
                .map(|y| w[0] * y[0] + w[1] * y[1])
                .fold(f64::INFINITY, f64::min);
            worst = worst.max((best - support).abs());
        }
    }
    if worst > tol {
        return Err(format!("largest deviation {worst:e} exceeds {tol:e}"));
    }
    Ok(format!("100 relaxations, {facets} supporting weights re-optimized, largest deviation {worst:e}"))
}

fn median(mut v: Vec<usize>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn node_reduction() -> Outcome {
    let started = Instant::now();
    let mut bb = Vec::new();
    let mut ns = Vec::new();
    for seed in 0..10 {
        let inst = generate(&GeneratorSpec::kp(3, 30, seed)).map_err(|e| e.to_string())?;
        for (base, into) in [(ApproachBase::Bb, &mut bb), (ApproachBase::NsLhg, &mut ns)] {
            let cfg = SolverConfig {
                clock: ClockMode::Work,
                ..Approach::new(base, false).config(GapMeasure::Lhg)
            };
            let out = solve(&inst, &cfg).map_err(|e| e.to_string())?;
            if !out.stats.solved_to_completion {
                return Err(format!("{base:?} did not finish seed {seed}"));
            }
            into.push(out.stats.nodes_explored);
        }
    }
    let (mb, mn) = (median(bb), median(ns));
    let reduction = 1.0 - mn / mb;
    let secs = started.elapsed().as_secs_f64();
    let msg = format!("median nodes BB {mb}, NS(LHG) {mn}, reduction {:.1}%, {secs:.1}s", 100.0 * reduction);
    if mn < mb && reduction >= 0.2 && secs < 600.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn schedule() -> Outcome {
    let inst = generate(&GeneratorSpec::kp(3, 40, 1)).map_err(|e| e.to_string())?;
    let (n, p) = (inst.n(), inst.p());
    let cfg = SolverConfig {
        clock: ClockMode::Work,
        record_trace: true,
        node_limit: Some(p * n * n + 2 * n + 20),
        ..Approach::new(ApproachBase::Ec, false).config(GapMeasure::Lhg)
    };
    let out = solve(&inst, &cfg).map_err(|e| e.to_string())?;
    if out.stats.nodes_explored < p * n * n + n {
        return Err(format!("run ended after {} nodes, too early to judge", out.stats.nodes_explored));
    }
    let due: Vec<(usize, bool)> = out
        .trace
        .iter()
        .filter_map(|e| match e {
            TraceEvent::EcDue { iteration, performed } => Some((*iteration, *performed)),
            _ => None,
        })
        .collect();
    let want: Vec<usize> = (1..=p * n).map(|k| k * n).collect();
    let got: Vec<usize> = due.iter().map(|d| d.0).collect();
    if got != want {
        return Err(format!("EC due at {} iterations, first off-schedule {:?}", got.len(), got.iter().zip(&want).find(|(a, b)| a != b)));
    }
    let performed = due.iter().filter(|d| d.1).count();

    // SLB and TE on a depth-first run, which reaches deep levels quickly.
    let cfg = SolverConfig {
        clock: ClockMode::Work,
        record_trace: true,
        node_limit: Some(3000),
        node_selection: NodeSelection::DepthFirst,
        ..Approach::new(ApproachBase::Slb, true).config(GapMeasure::Lhg)
    };
    let out = solve(&inst, &cfg).map_err(|e| e.to_string())?;
    let mut selected = std::collections::BTreeMap::new();
    let (mut slb, mut te) = (BTreeSet::new(), BTreeSet::new());
    for e in &out.trace {
        match e {
            TraceEvent::NodeSelected { iteration, depth, free, .. } => {
                selected.insert(*iteration, (*depth, *free));
            }
            TraceEvent::Slb { iteration, .. } => {
                slb.insert(*iteration);
            }
            TraceEvent::Te { iteration, .. } => {
                te.insert(*iteration);
            }
            _ => {}
        }
    }
    let te_want: BTreeSet<usize> = selected.iter().filter(|(_, &(_, f))| f <= 10).map(|(&i, _)| i).collect();
    let slb_want: BTreeSet<usize> = selected
        .iter()
        .filter(|(i, &(d, _))| d > 0 && d % 5 == 0 && !te_want.contains(i))
        .map(|(&i, _)| i)
        .collect();
    if te != te_want {
        return Err(format!("TE at {} nodes, expected {}", te.len(), te_want.len()));
    }
    if slb != slb_want {
        return Err(format!("SLB at {} nodes, expected {}", slb.len(), slb_want.len()));
    }
    if te.is_empty() || slb.is_empty() {
        return Err("the depth-first run reached neither TE nor SLB".into());
    }
    let depths: BTreeSet<usize> = slb.iter().map(|i| selected[i].0).collect();
    Ok(format!(
        "EC due at 40, 80, ..., 4800 ({} iterations, {performed} solved, {} without a surviving lub); SLB at depths {depths:?}; TE at {} nodes, all with <= 10 free",
        due.len(),
        due.len() - performed,
        te.len()
    ))
}

fn mobb(args: &[&str]) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_mobb")).args(args).output().map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(String::from_utf8_lossy(&o.stderr).into_owned());
    }
    String::from_utf8(o.stdout).map_err(|e| e.to_string())
}

fn bench_dir(dir: &Path) -> Result<String, String> {
    let inst_dir = dir.join("instances");
    fs::create_dir_all(&inst_dir).map_err(|e| e.to_string())?;
    for spec in [
        GeneratorSpec::kp(3, 12, 1),
        GeneratorSpec::kp(3, 14, 2),
        GeneratorSpec::gap(2, 2, 6, 3),
        GeneratorSpec::uflp(3, 2, 5, 4),
    ] {
        let inst = generate(&spec).map_err(|e| e.to_string())?;
        write_instance(&inst, inst_dir.join(format!("{}.json", inst.name()))).map_err(|e| e.to_string())?;
    }
    Ok(inst_dir.to_string_lossy().into_owned())
}

fn determinism(dir: &Path) -> Outcome {
    let inst_dir = bench_dir(dir)?;
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for out in [&a, &b] {
        mobb(&["bench", &inst_dir, "--deterministic", "--out", out.to_str().unwrap()])?;
    }
    let (x, y) = (fs::read(&a).map_err(|e| e.to_string())?, fs::read(&b).map_err(|e| e.to_string())?);
    if x != y {
        return Err("bench CSVs differ".into());
    }
    Ok(format!("two bench runs, 7 approaches x 4 instances, {} identical bytes", x.len()))
}

fn output_format(dir: &Path) -> Outcome {
    let inst_dir = bench_dir(dir)?;
    let limit = 0.0005;
    let csv_path = dir.join("limited.csv");
    mobb(&[
        "bench", &inst_dir, "--approach", "BB,NS(LHG),SLB+TE", "--deterministic", "--time-limit", &limit.to_string(),
        "--out", csv_path.to_str().unwrap(),
    ])?;
    let full_path = dir.join("full.csv");
    mobb(&["bench", &inst_dir, "--deterministic", "--out", full_path.to_str().unwrap()])?;
    let mut unsolved = 0;
    for (path, limit) in [(&csv_path, Some(limit)), (&full_path, None)] {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let mut lines = text.lines();
        if lines.next() != Some("approach,instance,nodes,time_s,ips,solved,frontier") {
            return Err("bench header mismatch".into());
        }
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(format!("row with {} columns: {line}", f.len()));
            }
            if f[1] == "(mean)" {
                let ok = f[5].split_once('/').is_some_and(|(a, b)| a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok());
                if !ok || f[2].parse::<f64>().is_err() || f[3].parse::<f64>().is_err() {
                    return Err(format!("bad aggregate row: {line}"));
                }
                continue;
            }
            let nodes: usize = f[2].parse().map_err(|_| format!("nodes in {line}"))?;
            let time: f64 = f[3].parse().map_err(|_| format!("time_s in {line}"))?;
            f[4].parse::<usize>().map_err(|_| format!("ips in {line}"))?;
            let solved: bool = f[5].parse().map_err(|_| format!("solved in {line}"))?;
            f[6].parse::<usize>().map_err(|_| format!("frontier in {line}"))?;
            if nodes < 1 {
                return Err(format!("run without nodes: {line}"));
            }
            if !solved {
                unsolved += 1;
                if time < limit.unwrap_or(f64::INFINITY) {
                    return Err(format!("unsolved run below the time limit: {line}"));
                }
            }
        }
        let prof = mobb(&["profile", path.to_str().unwrap()])?;
        let mut plines = prof.lines();
        if plines.next() != Some("approach,time_s,proportion") {
            return Err("profile header mismatch".into());
        }
        let mut last: Option<(String, f64, f64)> = None;
        for line in plines {
            let f: Vec<&str> = line.split(',').collect();
            let (t, q): (f64, f64) = (f[1].parse().map_err(|_| line.to_string())?, f[2].parse().map_err(|_| line.to_string())?);
            if !(q > 0.0 && q <= 1.0) {
                return Err(format!("proportion out of range: {line}"));
            }
            if let Some((a, t0, q0)) = &last {
                if a == f[0] && (t < *t0 || q < *q0) {
                    return Err(format!("profile not monotone at {line}"));
                }
            }
            last = Some((f[0].to_string(), t, q));
        }
    }
    if unsolved == 0 {
        return Err("the time-limited bench solved everything, unsolved rows untested".into());
    }
    Ok(format!("bench schema and types hold, {unsolved} unsolved rows respect the limit, profiles monotone"))
}

fn main() {
    let started = Instant::now();
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut runs = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("oracle equivalence", oracle_equivalence(&mut runs)),
        ("search region geometry", search_region_geometry()),
        ("cut validity", cut_validity(&runs)),
        ("no false fathoming", no_false_fathoming(&runs)),
        ("dichotomic exactness", dichotomic_exactness()),
        ("node reduction NS(LHG) vs BB", node_reduction()),
        ("schedule conformance", schedule()),
        ("determinism", determinism(&dir.path().join("det"))),
        ("output format", output_format(&dir.path().join("fmt"))),
    ];

    let mut failed = 0;
    for (k, (name, res)) in results.iter().enumerate() {
        match res {
            Ok(msg) => println!("PASS [{}] {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {:.1}s",
        results.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
