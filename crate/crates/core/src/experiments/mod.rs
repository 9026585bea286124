//! Monte Carlo runs over `G(n, p)`: one row per trial, summaries per `n`.
//!
//! Trial `t` at size `n` draws everything from `trial_seed(seed, n, t)`, so a
//! row can be regenerated alone. Rows are grouped by a key, `n` except for the
//! dense run, which varies `c` on one graph per trial. Trials run in parallel and are collected in
//! `(n, t)` order. Exact quantities stay rational in the rows; floats appear
//! only in summaries and timings.

mod runs;

pub use runs::{
    run_common_color, run_degree_scaling, run_dense_poa, run_sparse_poa, CommonColorConfig,
    DegreeScalingConfig, DensePoaConfig, SetFamily, SparsePoaConfig,
};

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::equilibria::{PoaValue, SearchError};
use crate::generators::{derive_seed, GenError};
use crate::rational::{format_rational, to_f64, Extended, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentError::UnknownExperiment(_) => "UnknownExperiment",
            ExperimentError::Gen(e) => e.kind(),
            ExperimentError::Search(e) => e.kind(),
            ExperimentError::Io(_) => "Io",
            ExperimentError::Csv(_) => "Io",
        }
    }
}

pub const EXPERIMENTS: [&str; 4] = ["sparse-poa", "dense-poa", "degree-scaling", "common-color"];

pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, n as u64), trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Rat(Rational),
    Ext(Extended),
    Poa(PoaValue),
    Float(f64),
    Bool(bool),
    /// Not measured for this row (e.g. exact PoA above the size cap).
    Missing,
}

impl Cell {
    /// Numeric view for summaries; `None` is skipped.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Rat(v) => Some(to_f64(v)),
            Cell::Ext(v) => Some(v.to_f64()),
            Cell::Poa(v) => v.to_f64(),
            Cell::Float(v) => Some(*v),
            Cell::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            Cell::Missing => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Rat(v) => f.write_str(&format_rational(v)),
            Cell::Ext(Extended::Finite(v)) => f.write_str(&format_rational(v)),
            Cell::Ext(Extended::Infinite) => f.write_str("inf"),
            Cell::Poa(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Missing => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Group key: `n`, or `c` for the dense run.
    pub key: usize,
    pub trial: usize,
    pub seed: u64,
    /// Aligned with [`ExperimentReport::columns`].
    pub values: Vec<Cell>,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub key_name: &'static str,
    /// Run parameters, echoed into the summary.
    pub params: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let count = sorted.len();
        let mean = sorted.iter().sum::<f64>() / count as f64;
        let median = if count % 2 == 1 {
            sorted[count / 2]
        } else {
            (sorted[count / 2 - 1] + sorted[count / 2]) / 2.0
        };
        let std = if count > 1 && mean.is_finite() {
            (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else if count > 1 {
            f64::NAN
        } else {
            0.0
        };
        Some(Stats {
            count,
            mean,
            median,
            min: sorted[0],
            max: sorted[count - 1],
            std,
        })
    }

    fn to_json(&self) -> Value {
        json!({
            "count": self.count,
            "mean": float_json(self.mean),
            "median": float_json(self.median),
            "min": float_json(self.min),
            "max": float_json(self.max),
            "std": float_json(self.std),
        })
    }
}

fn float_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        Value::Null
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

impl ExperimentReport {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Distinct keys in row order.
    pub fn keys(&self) -> Vec<usize> {
        let mut keys: Vec<usize> = self.rows.iter().map(|r| r.key).collect();
        keys.dedup();
        keys
    }

    /// Cells of one column for rows with the given key.
    pub fn cells(&self, key: usize, name: &str) -> Vec<&Cell> {
        let idx = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .filter(|r| r.key == key)
            .map(|r| &r.values[idx])
            .collect()
    }

    pub fn floats(&self, key: usize, name: &str) -> Vec<f64> {
        self.cells(key, name)
            .into_iter()
            .filter_map(Cell::as_f64)
            .collect()
    }

    pub fn stats(&self, key: usize, name: &str) -> Option<Stats> {
        Stats::of(&self.floats(key, name))
    }

    /// Rows where a boolean check column is false.
    pub fn failures(&self, name: &str) -> Vec<&Row> {
        let idx = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .filter(|r| r.values[idx] == Cell::Bool(false))
            .collect()
    }

    /// Per-key statistics of every column, plus the run parameters.
    pub fn summary(&self) -> Value {
        let mut per_key = serde_json::Map::new();
        for key in self.keys() {
            let mut cols = serde_json::Map::new();
            for name in &self.columns {
                if let Some(stats) = self.stats(key, name) {
                    cols.insert(name.to_string(), stats.to_json());
                }
            }
            let times: Vec<f64> = self
                .rows
                .iter()
                .filter(|r| r.key == key)
                .map(|r| r.millis)
                .collect();
            if let Some(stats) = Stats::of(&times) {
                cols.insert("millis".into(), stats.to_json());
            }
            per_key.insert(key.to_string(), Value::Object(cols));
        }
        json!({
            "experiment": self.experiment,
            "seed": self.seed,
            "params": self.params,
            "key": self.key_name,
            "rows": self.rows.len(),
            "summary": per_key,
        })
    }

    /// Header `<key>,trial,seed,<columns>,millis`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ExperimentError> {
        let mut writer = csv::Writer::from_writer(out);
        let mut header = vec![self.key_name, "trial", "seed"];
        header.extend(self.columns.iter().copied());
        header.push("millis");
        writer.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![
                row.key.to_string(),
                row.trial.to_string(),
                row.seed.to_string(),
            ];
            record.extend(row.values.iter().map(Cell::to_string));
            record.push(format!("{:.3}", row.millis));
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Writes `<experiment>.csv` and `<experiment>.summary.json` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), ExperimentError> {
        std::fs::create_dir_all(dir)?;
        let csv_file = std::fs::File::create(dir.join(format!("{}.csv", self.experiment)))?;
        self.write_csv(std::io::BufWriter::new(csv_file))?;
        let text = serde_json::to_string_pretty(&self.summary()).expect("json values serialize");
        std::fs::write(
            dir.join(format!("{}.summary.json", self.experiment)),
            text + "\n",
        )?;
        Ok(())
    }

    /// Rows without timings, for reproducibility checks.
    pub fn values(&self) -> BTreeMap<(usize, usize), (u64, Vec<Cell>)> {
        self.rows
            .iter()
            .map(|r| ((r.key, r.trial), (r.seed, r.values.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_of_small_sample() {
        let s = Stats::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.median, 2.5);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - 1.290_994_448_735_805_6).abs() < 1e-12);
        assert_eq!(Stats::of(&[7.0]).unwrap().std, 0.0);
        assert!(Stats::of(&[]).is_none());
    }

    #[test]
    fn infinite_values_serialize_as_strings() {
        let s = Stats::of(&[1.0, f64::INFINITY]).unwrap();
        assert_eq!(s.to_json()["max"], json!("inf"));
        assert_eq!(Cell::Ext(Extended::Infinite).to_string(), "inf");
        assert_eq!(Cell::Poa(PoaValue::NoEquilibrium).to_string(), "none");
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 8, 0), trial_seed(1, 8, 1));
        assert_ne!(trial_seed(1, 8, 0), trial_seed(1, 9, 0));
    }
}
