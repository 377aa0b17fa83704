use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::FactorModelConfig;
use crate::error::Result;
use crate::linalg::{Matrix, ReturnMatrix};
use crate::rng::{asset_stream, cluster_stream, stream_rng, COMMON_STREAM};

fn normals(seed: u64, stream: u64, out: &mut [f64]) {
    let mut rng = stream_rng(seed, stream);
    for x in out.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
}

/// Draws one realization of the factor model.
///
/// Background rows: `γ_N m_N + (1 − γ_N) ε_i`.
/// Cluster rows: `γ_k m_k + (1 − γ_k) γ_N m_N + (1 − γ_k)(1 − γ_N) ε_i`.
/// Rows are not normalized. Each mode and each asset has its own random
/// stream, so the output is identical for any thread count.
pub fn simulate(cfg: &FactorModelConfig) -> Result<ReturnMatrix> {
    cfg.validate()?;
    let (n, t) = (cfg.n_assets, cfg.n_obs);
    let g_n = cfg.common_mode;

    let mut common = vec![0.0; t];
    normals(cfg.seed, COMMON_STREAM, &mut common);
    let modes: Vec<Vec<f64>> = (0..cfg.clusters.len())
        .map(|k| {
            let mut m = vec![0.0; t];
            normals(cfg.seed, cluster_stream(k), &mut m);
            m
        })
        .collect();
    let membership = cfg.membership();

    let mut data = vec![0.0; n * t];
    data.par_chunks_mut(t).enumerate().for_each(|(i, row)| {
        normals(cfg.seed, asset_stream(i), row);
        match membership[i] {
            None => {
                for (x, m) in row.iter_mut().zip(&common) {
                    *x = g_n * m + (1.0 - g_n) * *x;
                }
            }
            Some(k) => {
                let g_k = cfg.clusters[k].coupling;
                let a = (1.0 - g_k) * g_n;
                let b = (1.0 - g_k) * (1.0 - g_n);
                for ((x, m), mk) in row.iter_mut().zip(&common).zip(&modes[k]) {
                    *x = g_k * mk + a * m + b * *x;
                }
            }
        }
    });
    ReturnMatrix::new(Matrix::from_row_major(n, t, data)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::ClusterSpec;
    use crate::linalg::returns::mean_var;

    fn cfg(n: usize, t: usize, g_n: f64) -> FactorModelConfig {
        FactorModelConfig {
            n_assets: n,
            n_obs: t,
            clusters: vec![],
            common_mode: g_n,
            seed: 11,
        }
    }

    #[test]
    fn pure_noise_rows_have_unit_variance() {
        let r = simulate(&cfg(20, 2000, 0.0)).unwrap();
        for i in 0..20 {
            let (_, var) = mean_var(r.row(i));
            assert!((0.9..=1.1).contains(&var), "row {i} variance {var}");
        }
    }

    #[test]
    fn full_common_mode_gives_identical_rows() {
        let r = simulate(&cfg(5, 100, 1.0)).unwrap();
        for i in 1..5 {
            assert_eq!(r.row(i), r.row(0));
        }
    }

    #[test]
    fn same_seed_same_output() {
        let mut c = cfg(8, 50, 0.3);
        c.clusters.push(ClusterSpec { size: 3, coupling: 0.6 });
        assert_eq!(simulate(&c).unwrap(), simulate(&c).unwrap());
        assert_ne!(simulate(&c).unwrap(), simulate(&c.with_seed(12)).unwrap());
    }
}
