use serde::{Deserialize, Serialize};

use super::{mean_rho, ClusterPartition};
use crate::error::{check_param, Result};
use crate::linalg::CorrelationEstimate;
use crate::rmt::DegenerateSpectrum;

/// Eigenvalue assigned to the background bulk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BackgroundLevel {
    /// Λ₂ = 1, appropriate after reshuffling.
    Unit,
    /// Λ₂ taken from the data.
    Empirical(f64),
}

/// Two-atom population spectrum used to compare with a filtered empirical
/// spectrum once `large_eig_count` large eigenvalues are set aside.
///
/// With ρ̄ the mean cluster correlation, the small bulk sits at `Λ₁ = 1 − ρ̄`
/// with weight `(N̄ − 1)/(N − k)` and the background at Λ₂ with the remaining
/// weight; `N` counts cluster and background assets. Equal levels collapse to
/// one atom.
pub fn overlay_spectrum(
    p: &ClusterPartition,
    c: &CorrelationEstimate,
    large_eig_count: usize,
    level: BackgroundLevel,
) -> Result<DegenerateSpectrum> {
    let rho = mean_rho(c, &p.cluster_idx)?;
    let n = p.dim();
    let n_bar = p.n_bar();
    check_param(
        "large_eig_count",
        large_eig_count as f64,
        large_eig_count < n && n - large_eig_count > n_bar - 1,
        "leaves no background eigenvalues",
    )?;
    let lambda2 = match level {
        BackgroundLevel::Unit => 1.0,
        BackgroundLevel::Empirical(v) => v,
    };
    check_param("lambda2", lambda2, lambda2 > 0.0 && lambda2.is_finite(), "must be positive")?;
    let lambda1 = 1.0 - rho;
    check_param("mean cluster correlation", rho, lambda1 > 0.0, "must be below 1")?;
    let rest = (n - large_eig_count) as f64;
    let w1 = (n_bar - 1) as f64 / rest;
    if (lambda1 - lambda2).abs() <= 1e-12 {
        return DegenerateSpectrum::new(&[(lambda2, 1.0)]);
    }
    DegenerateSpectrum::normalized(&[(lambda1, w1), (lambda2, 1.0 - w1)])
}
