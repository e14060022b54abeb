//! Instance files and random generators for the benchmark families.

mod format;
mod generate;

pub use format::{from_str, read_instance, to_string, write_instance};
pub use generate::{generate, Family, GeneratorSpec};
