use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::args::ComplexArg;

/// Version of every JSON document and JSON-lines record this tool emits.
pub const SCHEMA_VERSION: u32 = 1;

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// An ordered list of named values, printed as `key: value` lines or one JSON object.
#[derive(Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("plain data serializes");
        self.fields.push((key.into(), v));
        self
    }

    pub fn write(&self, out: &mut dyn Write, json: bool) -> Result<()> {
        if json {
            let mut map = serde_json::Map::new();
            map.insert("schema_version".into(), SCHEMA_VERSION.into());
            for (k, v) in &self.fields {
                map.insert(k.clone(), v.clone());
            }
            return json_line(out, &Value::Object(map));
        }
        for (k, v) in &self.fields {
            writeln!(out, "{k}: {}", render(v))?;
        }
        Ok(())
    }
}

fn is_complex(v: &[Value]) -> bool {
    v.len() == 2 && v.iter().all(Value::is_f64)
}

/// Plain-text form of a JSON value; `[re, im]` pairs print as `a+bi`.
pub fn render(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) if is_complex(a) => {
            let z = Complex64::new(
                a[0].as_f64().unwrap_or(f64::NAN),
                a[1].as_f64().unwrap_or(f64::NAN),
            );
            ComplexArg(z).to_string()
        }
        Value::Array(a) => a.iter().map(render).collect::<Vec<_>>().join(", "),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", render(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
