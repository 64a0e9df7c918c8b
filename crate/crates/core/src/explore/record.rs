use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactset::FiniteSet;
use crate::quantity::Quantity;
use crate::verify::{evaluate, InequalityId, Params};

use super::generate::GeneratorSpec;
use super::search::{Direction, SearchMode};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a record's set came about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lineage {
    Generator { spec: GeneratorSpec },
    Search { mode: SearchMode, n: usize, budget: u64, seed: u64, restarts: u32, direction: Direction, ground: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub set: FiniteSet,
    pub inequality_id: InequalityId,
    pub ratio: Quantity,
    pub lineage: Lineage,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub artifact_version: String,
}

impl ExtremalRecord {
    pub fn new(set: FiniteSet, inequality_id: InequalityId, ratio: Quantity, lineage: Lineage) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        ExtremalRecord { set, inequality_id, ratio, lineage, timestamp, artifact_version: ARTIFACT_VERSION.to_string() }
    }

    /// Equality up to the timestamp.
    pub fn same_result(&self, other: &ExtremalRecord) -> bool {
        ExtremalRecord { timestamp: other.timestamp, ..self.clone() } == *other
    }

    /// Re-evaluates the stored set and compares the ratio exactly.
    pub fn reverify(&self) -> Result<bool> {
        let r = evaluate(self.inequality_id, &self.set, &Params::default())?;
        Ok(r.ratio == self.ratio)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedRecord {
    pub record: ExtremalRecord,
    /// Recomputing the ratio did not reproduce the stored value, or failed.
    pub drift: bool,
}

pub fn corpus_store(record: &ExtremalRecord, path: impl AsRef<Path>) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    f.write_all(line.as_bytes())?;
    Ok(())
}

pub fn corpus_load(path: impl AsRef<Path>) -> Result<Vec<LoadedRecord>> {
    let f = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ExtremalRecord =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        let drift = !record.reverify().unwrap_or(false);
        out.push(LoadedRecord { record, drift });
    }
    Ok(out)
}
