//! Argument definitions and the subcommands behind them.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mobb_core::clock::ClockMode;
use mobb_core::instances::{generate, read_instance, to_string, Family, GeneratorSpec};
use mobb_core::mobb::{default_measure, solve, Approach, Branching, NodeSelection, SolverConfig};
use mobb_core::model::{enumerate_nondominated, Fixings, DEFAULT_ENUMERATION_CAP};
use mobb_core::Instance;

use crate::bench::{read_bench_csv, run_bench, write_bench_csv, BenchInput};
use crate::profile::{profile, write_profile_csv};

#[derive(Debug, Parser)]
#[command(name = "mobb", version, about = "Multi-objective 0-1 branch and bound")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print its nondominated points.
    Solve(SolveArgs),
    /// Run a set of approaches on every instance of a directory.
    Bench(BenchArgs),
    /// Turn a bench CSV into performance-profile steps.
    Profile(ProfileArgs),
    /// Write random instances.
    Generate(GenerateArgs),
    /// Enumerate the nondominated points by brute force.
    Oracle(OracleArgs),
}

/// Settings shared by `solve` and `bench`. Switches only ever enable.
#[derive(Debug, Clone, Default, Args)]
pub struct TuneArgs {
    /// Node selection: depth, breadth, lhg or hsz.
    #[arg(long)]
    pub strategy: Option<NodeSelection>,
    /// Branching rule: mof or sor.
    #[arg(long)]
    pub branching: Option<Branching>,
    #[arg(long)]
    pub warmstart: bool,
    #[arg(long)]
    pub ec: bool,
    #[arg(long)]
    pub slb: bool,
    #[arg(long, value_name = "N")]
    pub slb_level: Option<usize>,
    #[arg(long)]
    pub te: bool,
    #[arg(long, value_name = "N")]
    pub te_threshold: Option<usize>,
    /// Seconds per run.
    #[arg(long, value_name = "S")]
    pub time_limit: Option<f64>,
    /// Facet refinements of the p >= 3 lower bound per node.
    #[arg(long, value_name = "N")]
    pub refine_max: Option<usize>,
    /// Measure time in simplex pivots so runs repeat exactly.
    #[arg(long)]
    pub deterministic: bool,
}

impl TuneArgs {
    pub fn apply(&self, cfg: &mut SolverConfig) {
        if let Some(s) = self.strategy {
            cfg.node_selection = s;
        }
        if let Some(b) = self.branching {
            cfg.branching = b;
        }
        cfg.warmstart |= self.warmstart;
        cfg.ec_enabled |= self.ec;
        cfg.slb_enabled |= self.slb;
        cfg.te_enabled |= self.te;
        if let Some(l) = self.slb_level {
            cfg.slb_level = l;
        }
        if let Some(t) = self.te_threshold {
            cfg.te_threshold = t;
        }
        if let Some(t) = self.time_limit {
            cfg.time_limit = Some(t);
        }
        if let Some(r) = self.refine_max {
            cfg.frontier.refine_max = r;
        }
        if self.deterministic {
            cfg.clock = ClockMode::Work;
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Start from a named configuration such as NS(HSZ) or SLB+TE.
    #[arg(long)]
    pub approach: Option<Approach>,
    #[command(flatten)]
    pub tune: TuneArgs,
    #[arg(long, value_name = "N")]
    pub node_limit: Option<usize>,
    /// Write one CSV row per solution: objective values, then the 0-1 vector.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of `.json` instances.
    pub dir: PathBuf,
    /// Comma-separated approaches; all seven by default.
    #[arg(long, value_delimiter = ',')]
    pub approach: Vec<Approach>,
    #[command(flatten)]
    pub tune: TuneArgs,
    /// CSV destination; standard output if absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    pub bench_csv: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// KP, UFLP, CFLP or GAP.
    #[arg(long)]
    pub family: Family,
    /// Number of objectives.
    #[arg(short = 'p', long, default_value_t = 3)]
    pub objectives: usize,
    /// Items for KP, FxC facilities by customers, AxJ agents by jobs.
    #[arg(long)]
    pub size: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instances to draw, with consecutive seeds.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// A `.json` file for a single instance, a directory otherwise;
    /// standard output if absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// Fix a variable, as `INDEX=VALUE`; repeatable.
    #[arg(long = "fix", value_name = "J=V")]
    pub fixes: Vec<String>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Profile(a) => cmd_profile(&a, out),
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Oracle(a) => cmd_oracle(&a, out),
    }
}

fn load(path: &Path) -> Result<Instance> {
    read_instance(path).with_context(|| format!("reading {}", path.display()))
}

fn write_points(out: &mut dyn Write, points: &[Vec<i64>]) -> Result<()> {
    writeln!(out, "nondominated points: {}", points.len())?;
    for y in points {
        let cells: Vec<String> = y.iter().map(i64::to_string).collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    Ok(())
}

/// Solver configuration for `solve`: the named approach if given, then the
/// individual settings on top.
pub fn solve_config(args: &SolveArgs, inst: &Instance) -> SolverConfig {
    let mut cfg = match args.approach {
        Some(a) => a.config(default_measure(inst.problem())),
        None => SolverConfig::default(),
    };
    args.tune.apply(&mut cfg);
    cfg.node_limit = args.node_limit;
    cfg
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let inst = load(&args.instance)?;
    let cfg = solve_config(args, &inst);
    let res = solve(&inst, &cfg)?;
    let s = &res.stats;
    writeln!(out, "instance: {}", inst.name())?;
    write_points(out, &res.points())?;
    writeln!(out, "nodes: {}", s.nodes_explored)?;
    writeln!(out, "ips: {}", s.ip_scalarizations)?;
    writeln!(out, "time_s: {:.6}", s.wall_time)?;
    writeln!(
        out,
        "fathomed: infeasible {} optimal {} dominance {} enumerated {}",
        s.fathomed_infeasible, s.fathomed_optimal, s.fathomed_dominance, s.enumerated
    )?;
    writeln!(out, "solved: {}", s.solved_to_completion)?;
    if let Some(path) = &args.out {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut header: Vec<String> = (1..=inst.p()).map(|k| format!("z{k}")).collect();
        header.push("x".into());
        w.write_record(&header)?;
        for sol in &res.solutions {
            let mut rec: Vec<String> = sol.image().iter().map(i64::to_string).collect();
            rec.push(sol.x().iter().map(u8::to_string).collect());
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    Ok(())
}

/// Instance files of a directory, sorted by file name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let files = instance_files(&args.dir)?;
    if files.is_empty() {
        bail!("no .json instances in {}", args.dir.display());
    }
    let inputs: Vec<BenchInput> = files
        .iter()
        .map(|p| match read_instance(p) {
            Ok(inst) => (inst.name().to_string(), Ok(inst)),
            Err(e) => {
                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                (stem, Err(e.to_string()))
            }
        })
        .collect();
    let approaches = if args.approach.is_empty() { Approach::matrix() } else { args.approach.clone() };
    let tune = args.tune.clone();
    let rows = run_bench(&inputs, &approaches, &move |cfg| tune.apply(cfg));
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_bench_csv(&rows, file)
        }
        None => write_bench_csv(&rows, out),
    }
}

fn cmd_profile(args: &ProfileArgs, out: &mut dyn Write) -> Result<()> {
    let file = File::open(&args.bench_csv).with_context(|| format!("opening {}", args.bench_csv.display()))?;
    let rows = read_bench_csv(BufReader::new(file))?;
    let steps = profile(&rows);
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_profile_csv(&steps, file)
        }
        None => write_profile_csv(&steps, out),
    }
}

/// `"40"` or `"7x7"`.
pub fn parse_size(s: &str) -> Result<(usize, usize)> {
    let parse = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad size `{s}`"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => Ok((parse(s)?, 1)),
    }
}

fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let size = parse_size(&args.size)?;
    if args.family != Family::Kp && size.1 == 1 && !args.size.contains(['x', 'X']) {
        bail!("{} needs a size of the form AxB", args.family);
    }
    if args.count == 0 {
        bail!("count must be positive");
    }
    let specs: Vec<GeneratorSpec> = (0..args.count as u64)
        .map(|k| GeneratorSpec::new(args.family, args.objectives, size, args.seed + k))
        .collect();
    let single_file = args.count == 1
        && args.out.as_ref().is_some_and(|p| p.extension().is_some_and(|x| x == "json") && !p.is_dir());
    for spec in specs {
        let inst = generate(&spec)?;
        let text = to_string(&inst);
        match &args.out {
            None => out.write_all(text.as_bytes())?,
            Some(path) if single_file => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("{}.json", inst.name()));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}

pub fn parse_fixings(n: usize, fixes: &[String]) -> Result<Fixings> {
    let mut pairs = Vec::new();
    for f in fixes {
        let (j, v) = f.split_once('=').with_context(|| format!("bad fixing `{f}`, expected J=V"))?;
        let j: usize = j.trim().parse().with_context(|| format!("bad index in `{f}`"))?;
        let v: u8 = v.trim().parse().with_context(|| format!("bad value in `{f}`"))?;
        pairs.push((j, v));
    }
    Ok(Fixings::from_pairs(n, &pairs)?)
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let inst = load(&args.instance)?;
    let fixings = parse_fixings(inst.n(), &args.fixes)?;
    let mut points: Vec<Vec<i64>> = enumerate_nondominated(&inst, &fixings, DEFAULT_ENUMERATION_CAP)?
        .iter()
        .map(|s| s.image().to_vec())
        .collect();
    points.sort();
    write_points(out, &points)
}
