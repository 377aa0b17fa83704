//! Extraction of one strongly correlated cluster and a weakly correlated
//! background from an empirical correlation matrix, plus the bootstrap and
//! reshuffle analyses run on the result.

mod bootstrap;
mod overlay;
mod select;

pub use bootstrap::{bootstrap_spectra, reshuffle, BootstrapResult, BootstrapSpec};
pub use overlay::{overlay_spectrum, BackgroundLevel};
pub use select::{assemble, find_background, find_cluster, mean_rho};

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::linalg::CorrelationEstimate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterThresholds {
    /// Minimum correlation inside the cluster.
    pub rho_u: f64,
    /// Maximum |correlation| between cluster and background.
    pub rho_d1: f64,
    /// Maximum |correlation| inside the background.
    pub rho_d2: f64,
}

impl FilterThresholds {
    pub fn new(rho_u: f64, rho_d1: f64, rho_d2: f64) -> Result<Self> {
        let t = Self { rho_u, rho_d1, rho_d2 };
        t.validate()?;
        Ok(t)
    }

    /// Requires `0 < ρ_D′ ≤ ρ_D″ < ρ_U ≤ 1`.
    pub fn validate(&self) -> Result<()> {
        check_param("rho_u", self.rho_u, self.rho_u > 0.0 && self.rho_u <= 1.0, "must lie in (0, 1]")?;
        check_param("rho_d1", self.rho_d1, self.rho_d1 > 0.0, "must be positive")?;
        check_param("rho_d1", self.rho_d1, self.rho_d1 <= self.rho_d2, "must not exceed rho_d2")?;
        check_param("rho_d2", self.rho_d2, self.rho_d2 < self.rho_u, "must be below rho_u")?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPartition {
    /// I_U, ascending.
    pub cluster_idx: Vec<usize>,
    /// I_D, ascending.
    pub background_idx: Vec<usize>,
    pub source_dim: usize,
}

impl ClusterPartition {
    pub fn new(cluster_idx: Vec<usize>, background_idx: Vec<usize>, source_dim: usize) -> Result<Self> {
        let mut seen = vec![false; source_dim];
        for &i in cluster_idx.iter().chain(&background_idx) {
            if i >= source_dim {
                return Err(Error::IndexOutOfRange { index: i, dim: source_dim });
            }
            if seen[i] {
                return Err(Error::InvalidConfig(format!("index {i} appears twice in the partition")));
            }
            seen[i] = true;
        }
        Ok(Self {
            cluster_idx,
            background_idx,
            source_dim,
        })
    }

    /// Runs cluster and background selection. `None` when no cluster of
    /// `min_size` exists.
    pub fn select(
        c: &CorrelationEstimate,
        t: &FilterThresholds,
        min_size: usize,
        max_size: usize,
    ) -> Result<Option<Self>> {
        t.validate()?;
        let Some(cluster) = find_cluster(c, t.rho_u, min_size, max_size)? else {
            return Ok(None);
        };
        let background = find_background(c, &cluster, t.rho_d1, t.rho_d2)?;
        Self::new(cluster, background, c.dim()).map(Some)
    }

    pub fn n_bar(&self) -> usize {
        self.cluster_idx.len()
    }

    pub fn dim(&self) -> usize {
        self.cluster_idx.len() + self.background_idx.len()
    }

    /// Cluster indices followed by background indices.
    pub fn ordered(&self) -> Vec<usize> {
        self.cluster_idx.iter().chain(&self.background_idx).copied().collect()
    }

    /// Whether the partition satisfies the threshold conditions on `c`.
    pub fn satisfies(&self, c: &CorrelationEstimate, t: &FilterThresholds) -> bool {
        let u = &self.cluster_idx;
        let d = &self.background_idx;
        let within_u = u.iter().all(|&i| u.iter().all(|&j| i == j || c.get(i, j) >= t.rho_u));
        let cross = u.iter().all(|&i| d.iter().all(|&j| c.get(i, j).abs() <= t.rho_d1));
        let within_d = d.iter().all(|&k| d.iter().all(|&l| k == l || c.get(k, l).abs() <= t.rho_d2));
        within_u && cross && within_d
    }
}
