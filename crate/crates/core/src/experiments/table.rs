//! Result tables written as CSV plus a JSON metadata sidecar.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Integer(i64),
    Text(String),
    /// Written as an empty field.
    Missing,
}

impl Value {
    fn render(&self) -> String {
        match self {
            // Shortest representation that round-trips, so identical runs
            // produce identical bytes.
            Value::Real(x) if x.is_finite() => format!("{x}"),
            Value::Real(_) | Value::Missing => String::new(),
            Value::Integer(n) => n.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            Value::Integer(n) => Some(*n as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<u32> for Value {
    fn from(n: u32) -> Self {
        Value::Integer(n as i64)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Integer(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.into())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Text(if b { "true" } else { "false" }.into())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

/// Values the physical model leaves open, recorded with every table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenParameters {
    pub enthalpy_sublimation_j_per_kg: f64,
    pub specific_impulse_s: f64,
    pub emissivity: f64,
    /// Solar concentration on the arrays (suns).
    pub array_concentration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub experiment: String,
    pub scenario_name: String,
    pub scenario_sha256: String,
    pub seed: u64,
    pub code_version: String,
    pub open_parameters: OpenParameters,
    /// Experiment-specific settings and summary values.
    pub details: BTreeMap<String, serde_json::Value>,
}

impl Metadata {
    pub fn new(experiment: &str, scenario_name: &str, scenario_bytes: &[u8], seed: u64, open: OpenParameters) -> Self {
        let digest = hex::encode(Sha256::digest(scenario_bytes));
        Self::with_digest(experiment, scenario_name, &digest, seed, open)
    }

    /// Metadata for a scenario whose SHA-256 hex digest is already known.
    pub fn with_digest(experiment: &str, scenario_name: &str, digest: &str, seed: u64, open: OpenParameters) -> Self {
        Self {
            experiment: experiment.into(),
            scenario_name: scenario_name.into(),
            scenario_sha256: digest.into(),
            seed,
            code_version: env!("CARGO_PKG_VERSION").into(),
            open_parameters: open,
            details: BTreeMap::new(),
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.details.insert(key.into(), v);
    }
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    table: &'a str,
    columns: &'a [Column],
    rows: usize,
    #[serde(flatten)]
    metadata: &'a Metadata,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
    pub metadata: Metadata,
}

impl ResultTable {
    pub fn new(name: &str, columns: Vec<Column>, metadata: Metadata) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidArgument(format!(
                "table {} has {} columns, row has {}",
                self.name,
                self.columns.len(),
                row.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// All values of column `name`.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn sidecar_json(&self) -> Result<String> {
        let s = Sidecar {
            table: &self.name,
            columns: &self.columns,
            rows: self.rows.len(),
            metadata: &self.metadata,
        };
        Ok(serde_json::to_string_pretty(&s)? + "\n")
    }

    /// Write `<name>.csv` and `<name>.meta.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        let meta_path = dir.join(format!("{}.meta.json", self.name));
        fs::write(&csv_path, self.to_csv()?)?;
        fs::write(&meta_path, self.sidecar_json()?)?;
        Ok((csv_path, meta_path))
    }
}
