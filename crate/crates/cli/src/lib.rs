//! Command-line front end of the mobb solver.

pub mod bench;
pub mod commands;
pub mod profile;

pub use bench::{read_bench_csv, run_bench, write_bench_csv, BenchRow};
pub use commands::{run, Cli};
pub use profile::{profile, write_profile_csv, ProfileStep};
