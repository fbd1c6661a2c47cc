//! Tabular sweep output.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{invalid, Result, RfeError};

/// A rectangular table of numeric results plus the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Map<String, Value>,
}

impl SweepResult {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        let mut metadata = Map::new();
        metadata.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new(), metadata }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(invalid(format!("row has {} values, header has {} columns", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Header row followed by one line per row. Floats use the shortest
    /// representation that round-trips, so output is byte-stable.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| RfeError::Config(format!("csv write failed: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
        }
        w.flush().map_err(|e| RfeError::Config(format!("csv write failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| RfeError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_is_enforced() {
        let mut s = SweepResult::new(["a", "b"]);
        assert!(s.push_row(vec![1.0]).is_err());
        s.push_row(vec![1.0, 2.5]).unwrap();
        assert_eq!(s.column("b").unwrap(), vec![2.5]);
        assert!(s.column("c").is_none());
    }

    #[test]
    fn csv_layout() {
        let mut s = SweepResult::new(["bits", "sdr_db"]).with_meta("seed", 7);
        s.push_row(vec![1.0, 2.4345]).unwrap();
        s.push_row(vec![2.0, f64::INFINITY]).unwrap();
        assert_eq!(s.to_csv_string().unwrap(), "bits,sdr_db\n1,2.4345\n2,inf\n");
        assert_eq!(s.metadata["seed"], 7);
        assert!(s.metadata.contains_key("version"));
    }
}
