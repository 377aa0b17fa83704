//! Cluster factor models: configuration, simulation and exact spectra.

mod simulate;
mod spectrum;

pub use simulate::simulate;
pub use spectrum::{
    analytic_spectrum_block, analytic_spectrum_single_cluster, analytic_spectrum_strong_clusters,
    block_correlation, theoretical_correlation, AnalyticSpectrum, SpectrumEntry,
};

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub size: usize,
    /// γ_k in `[0, 1]`.
    pub coupling: f64,
}

/// Returns of `n_assets` assets over `n_obs` periods. Clusters occupy the
/// first rows in the order given; the remaining rows are background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorModelConfig {
    pub n_assets: usize,
    pub n_obs: usize,
    pub clusters: Vec<ClusterSpec>,
    /// γ_N in `[0, 1]`.
    pub common_mode: f64,
    pub seed: u64,
}

impl FactorModelConfig {
    /// One cluster of `n_bar` assets with intra-cluster correlation `rho`
    /// and no common mode.
    pub fn single_cluster(n_assets: usize, n_obs: usize, n_bar: usize, rho: f64, seed: u64) -> Result<Self> {
        let cfg = Self {
            n_assets,
            n_obs,
            clusters: vec![ClusterSpec {
                size: n_bar,
                coupling: coupling_for_correlation(rho)?,
            }],
            common_mode: 0.0,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn n_bar(&self) -> usize {
        self.clusters.iter().map(|c| c.size).sum()
    }

    pub fn rect_ratio(&self) -> f64 {
        self.n_assets as f64 / self.n_obs as f64
    }

    /// Cluster index of every asset (`None` for background).
    pub fn membership(&self) -> Vec<Option<usize>> {
        let mut out = Vec::with_capacity(self.n_assets);
        for (k, c) in self.clusters.iter().enumerate() {
            out.extend(std::iter::repeat_n(Some(k), c.size));
        }
        out.resize(self.n_assets, None);
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_assets == 0 {
            return Err(Error::EmptyInput("factor model has no assets"));
        }
        if self.n_obs < 2 {
            return Err(Error::TooShort {
                what: "factor model observations",
                len: self.n_obs,
                min: 2,
            });
        }
        check_param("common_mode", self.common_mode, (0.0..=1.0).contains(&self.common_mode), "must lie in [0, 1]")?;
        for c in &self.clusters {
            check_param("cluster size", c.size as f64, c.size >= 1, "must be at least 1")?;
            check_param("cluster coupling", c.coupling, (0.0..=1.0).contains(&c.coupling), "must lie in [0, 1]")?;
        }
        let n_bar = self.n_bar();
        if n_bar > self.n_assets {
            return Err(Error::InvalidConfig(format!(
                "clusters hold {n_bar} assets but the model has only {}",
                self.n_assets
            )));
        }
        Ok(())
    }
}

/// A cluster of an exact block correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockCluster {
    pub size: usize,
    /// Common off-diagonal correlation ρ_k in `[0, 1]`.
    pub rho: f64,
}

/// Block-diagonal correlation model: one block per cluster, identity background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockModel {
    pub clusters: Vec<BlockCluster>,
    pub n_background: usize,
}

impl BlockModel {
    pub fn single(n: usize, n_bar: usize, rho: f64) -> Result<Self> {
        if n_bar > n {
            return Err(Error::InvalidConfig(format!("cluster size {n_bar} exceeds dimension {n}")));
        }
        let m = Self {
            clusters: vec![BlockCluster { size: n_bar, rho }],
            n_background: n - n_bar,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.clusters.iter().map(|c| c.size).sum::<usize>() + self.n_background
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.clusters {
            check_param("cluster size", c.size as f64, c.size >= 1, "must be at least 1")?;
            check_param("cluster rho", c.rho, (0.0..=1.0).contains(&c.rho), "must lie in [0, 1]")?;
        }
        if self.dim() == 0 {
            return Err(Error::EmptyInput("block model has dimension 0"));
        }
        Ok(())
    }
}

/// Coupling γ that produces intra-cluster correlation `rho` when there is no
/// common mode: ρ = γ² / ((1 − γ)² + γ²).
pub fn coupling_for_correlation(rho: f64) -> Result<f64> {
    check_param("rho", rho, (0.0..=1.0).contains(&rho), "must lie in [0, 1]")?;
    let (a, b) = (rho.sqrt(), (1.0 - rho).sqrt());
    Ok(a / (a + b))
}
