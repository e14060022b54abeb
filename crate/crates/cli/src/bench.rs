//! Benchmark matrix runs and their CSV form.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use mobb_core::mobb::{default_measure, solve, Approach, SolverConfig};
use mobb_core::Instance;

pub const BENCH_HEADER: [&str; 7] = ["approach", "instance", "nodes", "time_s", "ips", "solved", "frontier"];

/// Instance label of the per-approach aggregate rows.
pub const MEAN_LABEL: &str = "(mean)";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub approach: String,
    pub instance: String,
    pub nodes: usize,
    pub time_s: f64,
    pub ips: usize,
    pub solved: bool,
    pub frontier: usize,
}

/// An instance to benchmark, or the reason it could not be loaded.
pub type BenchInput = (String, std::result::Result<Instance, String>);

/// Run every approach on every instance. `tune` adjusts each approach's
/// configuration. Rows come back ordered by approach (in the given order),
/// then by instance name, whatever order the workers finish in.
pub fn run_bench(
    inputs: &[BenchInput],
    approaches: &[Approach],
    tune: &(dyn Fn(&mut SolverConfig) + Sync),
) -> Vec<BenchRow> {
    let jobs: Vec<(usize, &Approach, &BenchInput)> = approaches
        .iter()
        .enumerate()
        .flat_map(|(k, a)| inputs.iter().map(move |i| (k, a, i)))
        .collect();
    let mut rows: Vec<(usize, BenchRow)> = jobs
        .par_iter()
        .map(|&(k, approach, (label, inst))| (k, run_one(approach, label, inst, tune)))
        .collect();
    rows.sort_by(|(ka, a), (kb, b)| ka.cmp(kb).then_with(|| a.instance.cmp(&b.instance)));
    rows.into_iter().map(|(_, r)| r).collect()
}

fn run_one(
    approach: &Approach,
    label: &str,
    inst: &std::result::Result<Instance, String>,
    tune: &(dyn Fn(&mut SolverConfig) + Sync),
) -> BenchRow {
    let failed = |limit: Option<f64>| BenchRow {
        approach: approach.label(),
        instance: label.to_string(),
        nodes: 0,
        time_s: limit.unwrap_or(0.0),
        ips: 0,
        solved: false,
        frontier: 0,
    };
    let inst = match inst {
        Ok(i) => i,
        Err(e) => {
            eprintln!("warning: {label}: {e}");
            let mut cfg = SolverConfig::default();
            tune(&mut cfg);
            return failed(cfg.time_limit);
        }
    };
    let mut cfg = approach.config(default_measure(inst.problem()));
    tune(&mut cfg);
    match solve(inst, &cfg) {
        Ok(out) => {
            let solved = out.stats.solved_to_completion;
            let mut time_s = out.stats.wall_time;
            if let (false, Some(limit)) = (solved, cfg.time_limit) {
                time_s = time_s.max(limit);
            }
            BenchRow {
                approach: approach.label(),
                instance: label.to_string(),
                nodes: out.stats.nodes_explored,
                time_s,
                ips: out.stats.ip_scalarizations,
                solved,
                frontier: out.solutions.len(),
            }
        }
        Err(e) => {
            eprintln!("warning: {} on {label}: {e}", approach.label());
            failed(cfg.time_limit)
        }
    }
}

/// Write data rows followed, per approach, by an aggregate row of means
/// over all its runs, unsolved ones included, and a solved count.
pub fn write_bench_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(BENCH_HEADER)?;
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.approach.as_str()) {
            order.push(&r.approach);
        }
    }
    for approach in order {
        let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.approach == approach).collect();
        for r in &mine {
            w.write_record([
                r.approach.clone(),
                r.instance.clone(),
                r.nodes.to_string(),
                format!("{:.6}", r.time_s),
                r.ips.to_string(),
                r.solved.to_string(),
                r.frontier.to_string(),
            ])?;
        }
        let count = mine.len() as f64;
        let mean = |f: &dyn Fn(&BenchRow) -> f64| mine.iter().map(|r| f(r)).sum::<f64>() / count;
        let solved = mine.iter().filter(|r| r.solved).count();
        w.write_record([
            approach.to_string(),
            MEAN_LABEL.to_string(),
            format!("{:.3}", mean(&|r| r.nodes as f64)),
            format!("{:.6}", mean(&|r| r.time_s)),
            format!("{:.3}", mean(&|r| r.ips as f64)),
            format!("{solved}/{}", mine.len()),
            format!("{:.3}", mean(&|r| r.frontier as f64)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Data rows of a bench CSV; aggregate rows are skipped.
pub fn read_bench_csv(input: impl Read) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().context("reading bench header")?.clone();
    if header.iter().ne(BENCH_HEADER) {
        bail!("unexpected bench header `{}`", header.iter().collect::<Vec<_>>().join(","));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("bench row {}", i + 2))?;
        if &rec[1] == MEAN_LABEL {
            continue;
        }
        let line = i + 2;
        let field = |k: usize| -> &str { &rec[k] };
        rows.push(BenchRow {
            approach: field(0).to_string(),
            instance: field(1).to_string(),
            nodes: field(2).parse().with_context(|| format!("line {line}: nodes"))?,
            time_s: field(3).parse().with_context(|| format!("line {line}: time_s"))?,
            ips: field(4).parse().with_context(|| format!("line {line}: ips"))?,
            solved: field(5).parse().with_context(|| format!("line {line}: solved"))?,
            frontier: field(6).parse().with_context(|| format!("line {line}: frontier"))?,
        });
    }
    Ok(rows)
}
