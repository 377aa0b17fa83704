use serde::{Deserialize, Serialize};

use super::{BlockModel, FactorModelConfig};
use crate::error::{check_param, Error, Result};
use crate::linalg::{CorrelationEstimate, Matrix};

const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalue multiset of an exact correlation matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSpectrum {
    /// Ascending, distinct values.
    pub entries: Vec<SpectrumEntry>,
    pub total: usize,
}

impl AnalyticSpectrum {
    /// Sorts the pairs, merges values closer than 1e-12 and drops empty entries.
    pub fn new(pairs: impl IntoIterator<Item = (f64, usize)>) -> Self {
        let mut pairs: Vec<(f64, usize)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for (value, multiplicity) in pairs {
            match entries.last_mut() {
                Some(e) if (value - e.value).abs() <= MERGE_TOL * value.abs().max(1.0) => {
                    e.multiplicity += multiplicity;
                }
                _ => entries.push(SpectrumEntry { value, multiplicity }),
            }
        }
        let total = entries.iter().map(|e| e.multiplicity).sum();
        Self { entries, total }
    }

    /// Every eigenvalue, repeated by multiplicity, ascending.
    pub fn values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    pub fn largest(&self) -> Option<f64> {
        self.entries.last().map(|e| e.value)
    }
}

/// Exact correlation matrix of the factor model (unit diagonal).
pub fn theoretical_correlation(cfg: &FactorModelConfig) -> Result<CorrelationEstimate> {
    cfg.validate()?;
    let g_n = cfg.common_mode;
    let common2 = g_n * g_n;
    let noise2 = (1.0 - g_n) * (1.0 - g_n);
    let membership = cfg.membership();
    // loading on the common mode and exposure to its own cluster mode
    let damp: Vec<f64> = membership
        .iter()
        .map(|m| m.map_or(1.0, |k| 1.0 - cfg.clusters[k].coupling))
        .collect();
    let var: Vec<f64> = membership
        .iter()
        .zip(&damp)
        .map(|(m, d)| {
            let own = m.map_or(0.0, |k| cfg.clusters[k].coupling.powi(2));
            d * d * (noise2 + common2) + own
        })
        .collect();
    let n = cfg.n_assets;
    let m = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            return 1.0;
        }
        let mut cov = damp[i] * damp[j] * common2;
        if let (Some(a), Some(b)) = (membership[i], membership[j]) {
            if a == b {
                cov += cfg.clusters[a].coupling.powi(2);
            }
        }
        if cov == 0.0 {
            0.0
        } else {
            cov / (var[i] * var[j]).sqrt()
        }
    });
    CorrelationEstimate::exact(m)
}

/// Spectrum in the strong-cluster limit γ_k → 1.
pub fn analytic_spectrum_strong_clusters(cfg: &FactorModelConfig) -> Result<AnalyticSpectrum> {
    cfg.validate()?;
    let n_bar = cfg.n_bar();
    let n_bg = cfg.n_assets - n_bar;
    let g_n = cfg.common_mode;
    if n_bg == 0 && g_n > 0.0 {
        return Err(Error::InvalidConfig(
            "common mode requires at least one background asset".into(),
        ));
    }
    let mut pairs = vec![(0.0, n_bar - cfg.clusters.len())];
    pairs.extend(cfg.clusters.iter().map(|c| (c.size as f64, 1)));
    if n_bg > 0 {
        let noise2 = (1.0 - g_n) * (1.0 - g_n);
        let v = noise2 + g_n * g_n;
        pairs.push(((n_bg as f64 * g_n * g_n + noise2) / v, 1));
        pairs.push((noise2 / v, n_bg - 1));
    }
    Ok(AnalyticSpectrum::new(pairs))
}

/// Block-diagonal matrix: clusters first (unit diagonal, off-diagonal ρ_k),
/// then an identity background block.
pub fn block_correlation(model: &BlockModel) -> Result<CorrelationEstimate> {
    model.validate()?;
    let n = model.dim();
    let mut block = vec![None; n];
    let mut start = 0;
    for (k, c) in model.clusters.iter().enumerate() {
        block[start..start + c.size].fill(Some(k));
        start += c.size;
    }
    let m = Matrix::from_fn(n, n, |i, j| match (block[i], block[j]) {
        _ if i == j => 1.0,
        (Some(a), Some(b)) if a == b => model.clusters[a].rho,
        _ => 0.0,
    });
    CorrelationEstimate::exact(m)
}

/// Closed-form spectrum of a [`BlockModel`]: each cluster contributes
/// `1 − ρ_k` (×`N_k − 1`) and `N_k ρ_k + 1 − ρ_k`; the background contributes ones.
pub fn analytic_spectrum_block(model: &BlockModel) -> Result<AnalyticSpectrum> {
    model.validate()?;
    let mut pairs = Vec::new();
    for c in &model.clusters {
        pairs.push((1.0 - c.rho, c.size - 1));
        pairs.push((c.size as f64 * c.rho + 1.0 - c.rho, 1));
    }
    pairs.push((1.0, model.n_background));
    Ok(AnalyticSpectrum::new(pairs))
}

pub fn analytic_spectrum_single_cluster(n: usize, n_bar: usize, rho: f64) -> Result<AnalyticSpectrum> {
    check_param("n_bar", n_bar as f64, n_bar >= 1 && n_bar <= n, "need 1 <= n_bar <= n")?;
    analytic_spectrum_block(&BlockModel::single(n, n_bar, rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::ClusterSpec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn no_structure_gives_identity() {
        let cfg = FactorModelConfig {
            n_assets: 6,
            n_obs: 10,
            clusters: vec![],
            common_mode: 0.0,
            seed: 0,
        };
        assert_eq!(theoretical_correlation(&cfg).unwrap().matrix(), &Matrix::identity(6));
    }

    #[test]
    fn background_pair_correlation() {
        let cfg = FactorModelConfig {
            n_assets: 4,
            n_obs: 10,
            clusters: vec![],
            common_mode: 0.3,
            seed: 0,
        };
        let c = theoretical_correlation(&cfg).unwrap();
        // 0.09 / 0.58
        assert!(close(c.get(0, 1), 0.155_172_413_793_103_45, 1e-15));
        assert_eq!(c.matrix().trace(), 4.0);
    }

    #[test]
    fn strong_coupling_drives_cluster_correlation_to_one() {
        let cfg = FactorModelConfig {
            n_assets: 5,
            n_obs: 10,
            clusters: vec![ClusterSpec { size: 3, coupling: 1.0 - 1e-9 }],
            common_mode: 0.3,
            seed: 0,
        };
        let c = theoretical_correlation(&cfg).unwrap();
        assert!(close(c.get(0, 2), 1.0, 1e-12));
        assert!(c.get(0, 4).abs() < 1e-8);
    }

    #[test]
    fn cluster_correlation_in_mixed_model() {
        // same-cluster covariance 0.3^2*0.3^2 + 0.7^2 over variance 0.3^2*0.58 + 0.7^2
        let cfg = FactorModelConfig {
            n_assets: 500,
            n_obs: 2000,
            clusters: vec![ClusterSpec { size: 100, coupling: 0.7 }],
            common_mode: 0.3,
            seed: 0,
        };
        let c = theoretical_correlation(&cfg).unwrap();
        assert!(close(c.get(3, 7), 0.4981 / 0.5422, 1e-12));
    }

    #[test]
    fn strong_cluster_spectrum_values() {
        let cfg = FactorModelConfig {
            n_assets: 500,
            n_obs: 2000,
            clusters: vec![ClusterSpec { size: 100, coupling: 1.0 }],
            common_mode: 0.3,
            seed: 0,
        };
        let s = analytic_spectrum_strong_clusters(&cfg).unwrap();
        assert_eq!(s.total, 500);
        assert_eq!(s.entries[0], SpectrumEntry { value: 0.0, multiplicity: 99 });
        assert!(close(s.entries[1].value, 0.49 / 0.58, 1e-15));
        assert_eq!(s.entries[1].multiplicity, 399);
        assert!(s.values().contains(&100.0));

        let mut cfg0 = cfg.clone();
        cfg0.common_mode = 0.0;
        let s0 = analytic_spectrum_strong_clusters(&cfg0).unwrap();
        assert_eq!(
            s0.entries,
            vec![
                SpectrumEntry { value: 0.0, multiplicity: 99 },
                SpectrumEntry { value: 1.0, multiplicity: 400 },
                SpectrumEntry { value: 100.0, multiplicity: 1 },
            ]
        );

        let mut full = cfg.clone();
        full.n_assets = 100;
        assert!(analytic_spectrum_strong_clusters(&full).is_err());
    }

    #[test]
    fn single_cluster_spectra() {
        let s = analytic_spectrum_single_cluster(500, 100, 0.85).unwrap();
        assert!(close(s.largest().unwrap(), 85.15, 1e-12));
        let s = analytic_spectrum_single_cluster(28, 7, 0.707).unwrap();
        assert!(close(s.largest().unwrap(), 5.242, 1e-12));
        let s = analytic_spectrum_single_cluster(10, 4, 0.0).unwrap();
        assert_eq!(s.entries, vec![SpectrumEntry { value: 1.0, multiplicity: 10 }]);
    }

    #[test]
    fn small_block_matrix() {
        let m = BlockModel::single(3, 2, 0.5).unwrap();
        let c = block_correlation(&m).unwrap();
        let want = Matrix::from_rows(&[[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(c.matrix(), &want);
    }
}
