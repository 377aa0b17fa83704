//! `report.json` and the plot-ready CSV files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use corrspec::DensityCurve;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything a run produced. Contains no wall-clock data, so identical
/// configurations give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub command: String,
    pub library_version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    /// Files written next to the report, relative to the output directory.
    pub outputs: Vec<String>,
    pub results: Value,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn digest_file(path: &Path) -> CliResult<InputDigest> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let hash = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in hash {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex,
    })
}

/// Collects output files in memory; nothing touches disk until [`Outputs::write`].
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outputs {
    pub files: Vec<(String, String)>,
}

impl Outputs {
    pub fn density(&mut self, name: &str, curve: &DensityCurve) {
        let mut s = String::from("lambda,rho\n");
        for (l, r) in curve.lambda.iter().zip(&curve.rho) {
            let _ = writeln!(s, "{l:.8e},{r:.8e}");
        }
        self.files.push((format!("density_{name}.csv"), s));
    }

    pub fn eigs(&mut self, name: &str, values: &[f64]) {
        let mut s = String::new();
        for v in values {
            let _ = writeln!(s, "{v:.8e}");
        }
        self.files.push((format!("eigs_{name}.csv"), s));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|f| f.0.clone()).collect()
    }

    pub fn write(&self, dir: &Path, report: &AnalysisReport) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        let mut written = Vec::new();
        let all = self
            .files
            .iter()
            .map(|(n, c)| (n.as_str(), c.clone()))
            .chain(std::iter::once(("report.json", report.to_json())));
        for (name, content) in all {
            let p = dir.join(name);
            std::fs::write(&p, content).map_err(|e| CliError::io(format!("writing {}", p.display()), e))?;
            written.push(p);
        }
        Ok(written)
    }
}
