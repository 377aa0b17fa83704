//! Run configuration: a TOML file with one table per concern, plus
//! `key.path=value` overrides from the command line.

use std::path::{Path, PathBuf};

use corrspec::cluster::FilterThresholds;
use corrspec::factor::{coupling_for_correlation, ClusterSpec, FactorModelConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, Context};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub model: ModelSection,
    pub histogram: HistogramSection,
    pub spectrum: SpectrumSection,
    pub solver: SolverSection,
    pub mp: MpSection,
    pub fit: FitSection,
    pub input: InputSection,
    pub filter: FilterSection,
    pub bootstrap: BootstrapSection,
    pub test: TestSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            model: ModelSection::default(),
            histogram: HistogramSection::default(),
            spectrum: SpectrumSection::default(),
            solver: SolverSection::default(),
            mp: MpSection::default(),
            fit: FitSection::default(),
            input: InputSection::default(),
            filter: FilterSection::default(),
            bootstrap: BootstrapSection::default(),
            test: TestSection::default(),
        }
    }
}

/// A cluster given either by its coupling γ_k or by the intra-cluster
/// correlation it should produce without a common mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterEntry {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub n_assets: usize,
    pub n_obs: usize,
    pub common_mode: f64,
    pub clusters: Vec<ClusterEntry>,
    /// Monte Carlo repetitions.
    pub simulations: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            n_assets: 500,
            n_obs: 2000,
            common_mode: 0.0,
            clusters: vec![],
            simulations: 1,
        }
    }
}

impl ModelSection {
    pub fn factor_config(&self, seed: u64) -> CliResult<FactorModelConfig> {
        let mut clusters = Vec::with_capacity(self.clusters.len());
        for (k, c) in self.clusters.iter().enumerate() {
            let coupling = match (c.coupling, c.rho) {
                (Some(g), None) => g,
                (None, Some(r)) => coupling_for_correlation(r).ctx(&format!("model.clusters[{k}].rho"))?,
                _ => {
                    return Err(CliError::Validation(format!(
                        "model.clusters[{k}]: give exactly one of `coupling` or `rho`"
                    )))
                }
            };
            clusters.push(ClusterSpec { size: c.size, coupling });
        }
        let cfg = FactorModelConfig {
            n_assets: self.n_assets,
            n_obs: self.n_obs,
            clusters,
            common_mode: self.common_mode,
            seed,
        };
        cfg.validate().ctx("model")?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HistogramSection {
    pub bins: usize,
    /// Largest eigenvalues of each spectrum left out of densities and bulk statistics.
    pub drop_largest: usize,
}

impl Default for HistogramSection {
    fn default() -> Self {
        Self { bins: 100, drop_largest: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    /// `spectrum.atoms` with `spectrum.q`.
    Atoms,
    /// Exact eigenvalues of the model correlation matrix, q = N/T.
    Model,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub source: SpectrumSource,
    /// `[value, weight]` pairs.
    pub atoms: Vec<[f64; 2]>,
    pub q: f64,
    /// With `source = "model"`, eigenvalues of lower multiplicity are dropped.
    pub min_multiplicity: usize,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            source: SpectrumSource::Atoms,
            atoms: vec![[1.0, 1.0]],
            q: 0.25,
            min_multiplicity: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub epsilon: f64,
    pub points: usize,
    pub grid_lo: Option<f64>,
    pub grid_hi: Option<f64>,
    pub branch_seed_z: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            epsilon: corrspec::rmt::DEFAULT_EPSILON,
            points: 2000,
            grid_lo: None,
            grid_hi: None,
            branch_seed_z: corrspec::rmt::DEFAULT_ANCHOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MpSection {
    pub q: f64,
    pub sigma: f64,
    pub points: usize,
}

impl Default for MpSection {
    fn default() -> Self {
        Self {
            q: 0.25,
            sigma: 1.0,
            points: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSection {
    pub bins: usize,
    pub q_hint: Option<f64>,
    pub sigma_hint: Option<f64>,
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            bins: 100,
            q_hint: None,
            sigma_hint: None,
            max_iter: 200,
            restarts: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    Prices,
    Returns,
    /// One value per line (eigenvalues or any sample).
    Values,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputSection {
    pub path: Option<PathBuf>,
    pub kind: InputKind,
}

impl Default for InputSection {
    fn default() -> Self {
        Self {
            path: None,
            kind: InputKind::Prices,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackgroundSetting {
    Unit,
    /// Mean of the background bulk of the filtered spectrum.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSection {
    pub rho_u: f64,
    pub rho_d1: f64,
    pub rho_d2: f64,
    pub min_size: usize,
    pub max_size: usize,
    pub large_eig_count: usize,
    pub background_level: BackgroundSetting,
}

impl Default for FilterSection {
    fn default() -> Self {
        Self {
            rho_u: 0.5,
            rho_d1: 0.15,
            rho_d2: 0.15,
            min_size: 3,
            max_size: 100,
            large_eig_count: 1,
            background_level: BackgroundSetting::Empirical,
        }
    }
}

impl FilterSection {
    pub fn thresholds(&self) -> CliResult<FilterThresholds> {
        FilterThresholds::new(self.rho_u, self.rho_d1, self.rho_d2).ctx("filter")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapSection {
    pub iterations: usize,
    /// Defaults to the whole background.
    pub keep_background: Option<usize>,
    pub reshuffle: bool,
}

impl Default for BootstrapSection {
    fn default() -> Self {
        Self {
            iterations: 100,
            keep_background: None,
            reshuffle: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestName {
    JarqueBera,
    Lilliefors,
    KolmogorovSmirnov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KsReference {
    /// Normal with the sample mean and sd.
    NormalFit,
    /// Marčenko-Pastur with `mp.q`, `mp.sigma`.
    Mp,
    /// Density solved from the `spectrum` section.
    Solved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// Largest eigenvalue of each simulation.
    Largest,
    /// Pooled eigenvalues without the `histogram.drop_largest` largest.
    Bulk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TestSection {
    pub tests: Vec<TestName>,
    pub ks_reference: KsReference,
    /// Sample drawn from simulations when no input file is given.
    pub sample: SampleKind,
}

impl Default for TestSection {
    fn default() -> Self {
        Self {
            tests: vec![TestName::JarqueBera, TestName::Lilliefors, TestName::KolmogorovSmirnov],
            ks_reference: KsReference::NormalFit,
            sample: SampleKind::Largest,
        }
    }
}

/// Reads `path` (if any), applies `key.path=value` overrides in order and
/// deserializes. Override values are parsed as TOML and fall back to strings.
pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<RunConfig> {
    let mut table: toml::Table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))?;
            text.parse()
                .map_err(|e| CliError::Validation(format!("config {}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| CliError::Validation(format!("config: {e}")))
}

fn apply_override(table: &mut toml::Table, spec: &str) -> CliResult<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("override `{spec}` is not of the form key=value")))?;
    let value = parse_value(raw.trim());
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Validation(format!("override `{spec}` has an empty key segment")));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Validation(format!("override `{spec}`: `{p}` is not a table")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
