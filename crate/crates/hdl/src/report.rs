//! CSV and JSON report emission. Reports carry no timings, so reruns are byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::InstanceConfig;

/// Rows of one experiment, already serialised.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutput {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub rows: usize,
    pub records: serde_json::Value,
    #[serde(skip)]
    pub csv: String,
}

impl ExperimentOutput {
    pub fn new<R: Serialize>(name: &str, rows: &[R], passed: bool, summary: String) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let csv = String::from_utf8(w.into_inner().context("flushing csv")?)?;
        Ok(ExperimentOutput {
            name: name.to_string(),
            passed,
            summary,
            rows: rows.len(),
            records: serde_json::to_value(rows)?,
            csv,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub generators: String,
    pub config: InstanceConfig,
    pub experiments: Vec<ExperimentOutput>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.experiments.iter().all(|e| e.passed)
    }

    /// Writes `<experiment>.csv` for each experiment and `report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        for e in &self.experiments {
            let path = dir.join(format!("{}.csv", e.name));
            fs::write(&path, &e.csv).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        let path = dir.join("report.json");
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        Ok(written)
    }
}
