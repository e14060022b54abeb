use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mobb_core::instances::write_instance;
use mobb_core::{Instance, Sense};

fn mobb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn points(text: &str) -> Vec<String> {
    let mut lines = text.lines().skip_while(|l| !l.starts_with("nondominated points:"));
    let count: usize = lines.next().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    lines.take(count).map(str::to_string).collect()
}

fn tiny_kp(dir: &Path) -> String {
    let inst = Instance::new("tiny", "KP", vec![vec![-3, -1], vec![-1, -3]], vec![vec![1, 1]], vec![1], vec![Sense::Le]).unwrap();
    let path = dir.join("tiny.json");
    write_instance(&inst, &path).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solve_prints_the_two_knapsack_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = tiny_kp(dir.path());
    let out = stdout(&mobb(&["solve", &path]));
    assert_eq!(points(&out), ["-3 -1", "-1 -3"]);
    assert!(out.contains("solved: true"));
}

#[test]
fn solve_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("g");
    let gen = gen.to_str().unwrap();
    for (family, size) in [("kp", "9"), ("gap", "2x4"), ("uflp", "2x4"), ("cflp", "2x3")] {
        stdout(&mobb(&["generate", "--family", family, "-p", "3", "--size", size, "--seed", "5", "--out", gen]));
    }
    for entry in fs::read_dir(gen).unwrap() {
        let path = entry.unwrap().path();
        let path = path.to_str().unwrap();
        let expected = points(&stdout(&mobb(&["oracle", path])));
        for approach in ["BB", "NS(HSZ)", "SLB+TE"] {
            let got = points(&stdout(&mobb(&["solve", path, "--approach", approach, "--slb-level", "2"])));
            assert_eq!(got, expected, "{approach} on {path}");
        }
    }
}

#[test]
fn all_switches_together() {
    let dir = tempfile::tempdir().unwrap();
    let path = tiny_kp(dir.path());
    let csv = dir.path().join("sols.csv");
    let out = stdout(&mobb(&[
        "solve", &path, "--strategy", "hsz", "--branching", "sor", "--warmstart", "--ec", "--slb", "--te",
        "--slb-level", "5", "--te-threshold", "10", "--time-limit", "60", "--refine-max", "10", "--deterministic",
        "--out", csv.to_str().unwrap(),
    ]));
    assert_eq!(points(&out).len(), 2);
    assert_eq!(fs::read_to_string(csv).unwrap(), "z1,z2,x\n-3,-1,10\n-1,-3,01\n");
}

#[test]
fn usage_errors_exit_nonzero() {
    let o = mobb(&["solve", "x.json", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mobb(&["solve", "/nonexistent/x.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_handles_fixings_and_refuses_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    let path = tiny_kp(dir.path());
    assert_eq!(points(&stdout(&mobb(&["oracle", &path, "--fix", "0=1"]))), ["-3 -1"]);
    assert_eq!(points(&stdout(&mobb(&["oracle", &path, "--fix", "0=1", "--fix", "1=1"]))).len(), 0);
    let big = dir.path().join("big.json");
    stdout(&mobb(&["generate", "--family", "kp", "-p", "2", "--size", "26", "--out", big.to_str().unwrap()]));
    let o = mobb(&["oracle", big.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("enumeration cap"));
}

#[test]
fn bench_and_profile_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    stdout(&mobb(&["generate", "--family", "kp", "-p", "2", "--size", "8", "--count", "3", "--out", inst.to_str().unwrap()]));
    let csv = dir.path().join("bench.csv");
    stdout(&mobb(&[
        "bench", inst.to_str().unwrap(), "--approach", "BB,NS(LHG)", "--deterministic", "--out", csv.to_str().unwrap(),
    ]));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "approach,instance,nodes,time_s,ips,solved,frontier");
    assert_eq!(lines.len(), 1 + 6 + 2);
    assert_eq!(lines.iter().filter(|l| l.contains(",(mean),")).count(), 2);

    let prof = stdout(&mobb(&["profile", csv.to_str().unwrap()]));
    let mut prof_lines = prof.lines();
    assert_eq!(prof_lines.next(), Some("approach,time_s,proportion"));
    assert_eq!(prof_lines.rfind(|l| l.starts_with("BB,")).unwrap().rsplit(',').next(), Some("1"));

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "approach,instance,nodes,time_s,ips,solved,frontier\n").unwrap();
    assert_eq!(stdout(&mobb(&["profile", empty.to_str().unwrap()])), "approach,time_s,proportion\n");
}

#[test]
fn generation_is_byte_identical_per_seed() {
    let a = stdout(&mobb(&["generate", "--family", "cflp", "-p", "2", "--size", "3x4", "--seed", "9"]));
    let b = stdout(&mobb(&["generate", "--family", "cflp", "-p", "2", "--size", "3x4", "--seed", "9"]));
    assert_eq!(a, b);
    assert!(a.contains("\"problem\": \"CFLP\""));
}
