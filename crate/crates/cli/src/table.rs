//! Row tables and their JSON / CSV encodings.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A rectangular result table; every row names the relation it checks.
#[derive(Debug)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<(String, Vec<Value>)>,
    /// Human-readable descriptions of failed checks.
    pub violations: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            violations: Vec::new(),
        }
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, anchor: impl Into<String>, values: Vec<Value>) {
        assert_eq!(values.len(), self.columns.len(), "row width");
        self.rows.push((anchor.into(), values));
    }

    pub fn violate(&mut self, message: impl Into<String>) {
        self.violations.push(message.into());
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(anchor, values)| {
                let mut obj = Map::new();
                obj.insert("schema_version".into(), SCHEMA_VERSION.into());
                obj.insert("anchor".into(), anchor.clone().into());
                for (name, v) in self.columns.iter().zip(values) {
                    obj.insert((*name).into(), v.clone());
                }
                Value::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&rows)?;
        out.push(b'\n');
        Ok(out)
    }

    fn render_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["schema_version", "anchor"];
        header.extend(&self.columns);
        w.write_record(&header)?;
        for (anchor, values) in &self.rows {
            let mut record = vec![SCHEMA_VERSION.to_string(), anchor.clone()];
            record.extend(values.iter().map(cell));
            w.write_record(&record)?;
        }
        w.into_inner().context("flushing CSV buffer")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
