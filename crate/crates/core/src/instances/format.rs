use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::{Instance, Sense};

/// Render an instance in the canonical text format. Each matrix row sits on
/// its own line so files diff cleanly.
pub fn to_string(instance: &Instance) -> String {
    let mut s = String::new();
    let quote = |v: &str| Value::String(v.to_string()).to_string();
    let row = |r: &[i64]| {
        let items: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        format!("[{}]", items.join(", "))
    };
    let matrix = |rows: &[Vec<i64>]| -> String {
        if rows.is_empty() {
            return "[]".into();
        }
        let lines: Vec<String> = rows.iter().map(|r| format!("    {}", row(r))).collect();
        format!("[\n{}\n  ]", lines.join(",\n"))
    };
    let senses: Vec<String> = instance.senses().iter().map(|s| quote(s.as_str())).collect();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"problem\": {},", quote(instance.problem()));
    let _ = writeln!(s, "  \"name\": {},", quote(instance.name()));
    let _ = writeln!(s, "  \"p\": {},", instance.p());
    let _ = writeln!(s, "  \"n\": {},", instance.n());
    let _ = writeln!(s, "  \"m\": {},", instance.m());
    let _ = writeln!(s, "  \"C\": {},", matrix(instance.objectives()));
    let _ = writeln!(s, "  \"A\": {},", matrix(instance.constraints()));
    let _ = writeln!(s, "  \"b\": {},", row(instance.rhs()));
    let _ = writeln!(s, "  \"senses\": [{}]", senses.join(", "));
    s.push_str("}\n");
    s
}

/// Parse the canonical text format.
pub fn from_str(text: &str) -> Result<Instance> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    let problem = string(obj, "problem")?;
    let name = string(obj, "name")?;
    let p = count(obj, "p")?;
    let n = count(obj, "n")?;
    let m = count(obj, "m")?;
    let c = matrix(obj, "C")?;
    let a = matrix(obj, "A")?;
    let b = integers(field(obj, "b")?, "b")?;
    let senses = field(obj, "senses")?
        .as_array()
        .ok_or_else(|| Error::field("senses", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, v)| match v.as_str() {
            Some("le") => Ok(Sense::Le),
            Some("ge") => Ok(Sense::Ge),
            Some("eq") => Ok(Sense::Eq),
            _ => Err(Error::field(format!("senses[{i}]"), "expected \"le\", \"ge\" or \"eq\"")),
        })
        .collect::<Result<Vec<_>>>()?;

    if c.len() != p {
        return Err(Error::field("C", format!("expected {p} rows, found {}", c.len())));
    }
    if a.len() != m {
        return Err(Error::field("A", format!("expected {m} rows, found {}", a.len())));
    }
    if b.len() != m {
        return Err(Error::field("b", format!("expected {m} entries, found {}", b.len())));
    }
    if senses.len() != m {
        return Err(Error::field("senses", format!("expected {m} entries, found {}", senses.len())));
    }
    for (label, rows) in [("C", &c), ("A", &a)] {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::field(format!("{label}[{i}]"), format!("expected {n} entries, found {}", r.len())));
        }
    }
    Instance::new(name, problem, c, a, b, senses)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    from_str(&fs::read_to_string(path)?)
}

pub fn write_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_string(instance))?;
    Ok(())
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::field(name, "missing"))
}

fn string(obj: &Map<String, Value>, name: &str) -> Result<String> {
    field(obj, name)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| Error::field(name, "expected a string"))
}

fn count(obj: &Map<String, Value>, name: &str) -> Result<usize> {
    field(obj, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::field(name, "expected a nonnegative integer"))
}

fn integers(value: &Value, name: &str) -> Result<Vec<i64>> {
    value
        .as_array()
        .ok_or_else(|| Error::field(name, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(j, v)| {
            v.as_i64()
                .ok_or_else(|| Error::field(format!("{name}[{j}]"), format!("expected an integer, found {v}")))
        })
        .collect()
}

fn matrix(obj: &Map<String, Value>, name: &str) -> Result<Vec<Vec<i64>>> {
    field(obj, name)?
        .as_array()
        .ok_or_else(|| Error::field(name, "expected an array of rows"))?
        .iter()
        .enumerate()
        .map(|(i, r)| integers(r, &format!("{name}[{i}]")))
        .collect()
}
