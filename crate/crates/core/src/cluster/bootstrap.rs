use rand::seq::{index, SliceRandom};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ClusterPartition;
use crate::density::{histogram, DensityCurve};
use crate::error::{check_param, Error, Result};
use crate::linalg::{pearson_estimator, ReturnMatrix};
use crate::rng::{asset_stream, derive_seed, stream_rng, COMMON_STREAM};

/// Independently permutes the time order of each listed row. Row `i` uses
/// its own stream, so the result does not depend on the order of `rows`.
/// Repeated indices are shuffled once.
pub fn reshuffle(r: &ReturnMatrix, rows: &[usize], seed: u64) -> Result<ReturnMatrix> {
    let n = r.n_assets();
    let mut idx = rows.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let mut out = r.clone();
    for i in idx {
        let mut rng = stream_rng(seed, asset_stream(i));
        out.row_mut(i).shuffle(&mut rng);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSpec {
    pub iterations: usize,
    /// Background assets drawn (without replacement) per iteration.
    pub keep_background: usize,
    /// Reshuffle the drawn background rows before estimating.
    pub reshuffle: bool,
    pub seed: u64,
    /// Bins of the pooled histogram.
    pub bins: usize,
}

impl BootstrapSpec {
    pub fn new(keep_background: usize, seed: u64) -> Self {
        Self {
            iterations: 100,
            keep_background,
            reshuffle: false,
            seed,
            bins: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    /// Ascending eigenvalues of each iteration, in iteration order.
    pub spectra: Vec<Vec<f64>>,
    /// Histogram of all eigenvalues pooled.
    pub pooled: DensityCurve,
}

impl BootstrapResult {
    pub fn pooled_values(&self) -> Vec<f64> {
        self.spectra.iter().flatten().copied().collect()
    }
}

/// Spectra of the cluster plus random subsets of the background.
///
/// Each iteration keeps every cluster row, draws `keep_background` background
/// rows without replacement, optionally reshuffles those background rows,
/// standardizes, and records the eigenvalues of the Pearson estimate. The
/// rows are ordered cluster first, then the drawn background rows in their
/// original order.
pub fn bootstrap_spectra(r: &ReturnMatrix, p: &ClusterPartition, spec: &BootstrapSpec) -> Result<BootstrapResult> {
    check_param("iterations", spec.iterations as f64, spec.iterations >= 1, "need at least one iteration")?;
    let n_bg = p.background_idx.len();
    check_param(
        "keep_background",
        spec.keep_background as f64,
        spec.keep_background <= n_bg,
        "cannot exceed the background size",
    )?;
    if p.source_dim != r.n_assets() {
        return Err(Error::DimensionMismatch {
            expected: r.n_assets(),
            found: p.source_dim,
        });
    }
    if p.dim() == 0 {
        return Err(Error::EmptyInput("bootstrap over an empty partition"));
    }
    let n_bar = p.n_bar();
    let spectra = (0..spec.iterations)
        .into_par_iter()
        .map(|it| {
            let seed = derive_seed(spec.seed, it as u64);
            let mut rng = stream_rng(seed, COMMON_STREAM);
            let mut pick = index::sample(&mut rng, n_bg, spec.keep_background).into_vec();
            pick.sort_unstable();
            let mut rows = p.cluster_idx.clone();
            rows.extend(pick.iter().map(|&k| p.background_idx[k]));
            let mut sub = r.select_rows(&rows)?;
            if spec.reshuffle {
                let bg: Vec<usize> = (n_bar..rows.len()).collect();
                sub = reshuffle(&sub, &bg, seed)?;
            }
            pearson_estimator(&sub.standardize()?)?.eigenvalues()
        })
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<f64> = spectra.iter().flatten().copied().collect();
    let pooled = histogram(&all, spec.bins, None)?;
    Ok(BootstrapResult { spectra, pooled })
}
