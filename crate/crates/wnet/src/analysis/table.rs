use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Error, Result};

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::Table(format!(
                "unknown format {other:?} (csv or json)"
            ))),
        }
    }
}

/// Column-named table of reals with free-form metadata.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub meta: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            meta: BTreeMap::new(),
            columns,
            rows: Vec::new(),
        }
    }

    /// Builds the standard metadata: tool version plus `entries`.
    pub fn with_meta(mut self, entries: impl IntoIterator<Item = (&'static str, Value)>) -> Self {
        self.meta.insert(
            "tool_version".into(),
            Value::from(env!("CARGO_PKG_VERSION")),
        );
        for (k, v) in entries {
            self.meta.insert(k.to_string(), v);
        }
        self
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Table(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| round_sig(*v).to_string()))
                .map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::Table(e.to_string()))
    }

    /// Parses CSV produced by [`Table::to_csv`]; metadata is empty.
    pub fn from_csv(bytes: &[u8]) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(bytes);
        let columns = r
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(String::from)
            .collect();
        let mut table = Table::new(columns);
        for record in r.records() {
            let record = record.map_err(csv_err)?;
            let row = record
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::Table(format!("{f:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let rounded = Table {
            meta: self.meta.clone(),
            columns: self.columns.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| round_sig(*v)).collect())
                .collect(),
        };
        let mut out =
            serde_json::to_vec_pretty(&rounded).map_err(|e| Error::Table(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let table: Table =
            serde_json::from_slice(bytes).map_err(|e| Error::Table(e.to_string()))?;
        if let Some(bad) = table.rows.iter().find(|r| r.len() != table.columns.len()) {
            return Err(Error::Table(format!(
                "row has {} values for {} columns",
                bad.len(),
                table.columns.len()
            )));
        }
        Ok(table)
    }

    pub fn to_bytes(&self, format: ExportFormat) -> Result<Vec<u8>> {
        match format {
            ExportFormat::Csv => self.to_csv(),
            ExportFormat::Json => self.to_json(),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Table(e.to_string())
}

/// Serializes `table` and writes it to `out`.
pub fn curve_export<W: Write>(table: &Table, format: ExportFormat, out: &mut W) -> Result<()> {
    out.write_all(&table.to_bytes(format)?)?;
    Ok(())
}
