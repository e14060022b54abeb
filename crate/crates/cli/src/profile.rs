//! Performance profiles: the share of instances each approach has solved
//! by a given time.

use std::io::Write;

use anyhow::Result;

use crate::bench::BenchRow;

pub const PROFILE_HEADER: [&str; 3] = ["approach", "time_s", "proportion"];

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileStep {
    pub approach: String,
    pub time_s: f64,
    pub proportion: f64,
}

/// Step functions per approach, in order of first appearance. Runs that
/// finish at the same time form a single step.
pub fn profile(rows: &[BenchRow]) -> Vec<ProfileStep> {
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.approach.as_str()) {
            order.push(&r.approach);
        }
    }
    let mut steps = Vec::new();
    for approach in order {
        let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.approach == approach).collect();
        let total = mine.len() as f64;
        let mut times: Vec<f64> = mine.iter().filter(|r| r.solved).map(|r| r.time_s).collect();
        times.sort_by(f64::total_cmp);
        for (k, &t) in times.iter().enumerate() {
            if times.get(k + 1) == Some(&t) {
                continue;
            }
            steps.push(ProfileStep {
                approach: approach.to_string(),
                time_s: t,
                proportion: (k + 1) as f64 / total,
            });
        }
    }
    steps
}

pub fn write_profile_csv(steps: &[ProfileStep], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    for s in steps {
        w.write_record([s.approach.clone(), s.time_s.to_string(), s.proportion.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
