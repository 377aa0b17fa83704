//! Least-squares Marchenko-Pastur fit with free `q` and `σ`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::mp::MPParams;
use crate::density::{histogram, DensityCurve};
use crate::error::{check_param, Error, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy)]
pub enum FitTarget<'a> {
    /// Eigenvalues; binned into a histogram over `[min, max]`.
    Sample(&'a [f64]),
    Curve(&'a DensityCurve),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpFitOptions {
    pub bins: usize,
    /// Starting `q`, usually `N / T`. Defaults to `var / mean²` of the data.
    pub q_hint: Option<f64>,
    /// Starting `σ`. Defaults to `√mean`.
    pub sigma_hint: Option<f64>,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for MpFitOptions {
    fn default() -> Self {
        Self {
            bins: 100,
            q_hint: None,
            sigma_hint: None,
            max_iter: 200,
            restarts: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpFit {
    pub params: MPParams,
    /// Squared L2 distance between the fitted law and the target.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Nelder-Mead on `(ln q, ln σ)`. Returns (best point, value, iterations, converged).
fn nelder_mead(f: &dyn Fn([f64; 2]) -> f64, x0: [f64; 2], step: f64, max_iter: usize) -> ([f64; 2], f64, usize, bool) {
    let mut s = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut v = s.map(f);
    for iter in 1..=max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);

        let size = (1..3)
            .map(|k| (s[k][0] - s[0][0]).abs().max((s[k][1] - s[0][1]).abs()))
            .fold(0.0, f64::max);
        if size < 1e-8 && (v[2] - v[0]).abs() <= 1e-12 * (v[0].abs() + 1e-300) {
            return (s[0], v[0], iter, true);
        }

        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let along = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = along(-1.0);
        let fr = f(xr);
        if fr < v[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let (xc, fc) = if fr < v[2] {
                let x = along(-0.5);
                (x, f(x))
            } else {
                let x = along(0.5);
                (x, f(x))
            };
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for k in 1..3 {
                    s[k] = [(s[0][0] + s[k][0]) / 2.0, (s[0][1] + s[k][1]) / 2.0];
                    v[k] = f(s[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(0);
    (s[best], v[best], max_iter, false)
}

/// Fits `(q, σ)` by minimizing `∫ (mp(λ; q, σ) − ρ(λ))² dλ` over the target
/// grid. The search starts at the hints (or moment estimates), then restarts
/// from jittered copies of the start; the best result is kept. When no run
/// converges within `max_iter`, the best point found is still returned with
/// `converged = false`.
pub fn mp_fit(target: FitTarget<'_>, opts: &MpFitOptions) -> Result<MpFit> {
    let curve = match target {
        FitTarget::Sample(xs) => {
            if xs.len() < 20 {
                return Err(Error::TooShort {
                    what: "eigenvalue sample",
                    len: xs.len(),
                    min: 20,
                });
            }
            histogram(xs, opts.bins, None)?
        }
        FitTarget::Curve(c) => {
            if c.is_empty() {
                return Err(Error::EmptyInput("density curve"));
            }
            c.clone()
        }
    };
    check_param("max_iter", opts.max_iter as f64, opts.max_iter >= 1, "need at least one iteration")?;

    let weights: Vec<f64> = match curve.bin_width {
        Some(w) => vec![w; curve.len()],
        None => {
            let l = &curve.lambda;
            (0..l.len())
                .map(|k| 0.5 * (l[(k + 1).min(l.len() - 1)] - l[k.saturating_sub(1)]))
                .collect()
        }
    };
    let mass = curve.moment(0);
    let mean = curve.moment(1) / mass;
    let var = curve.moment(2) / mass - mean * mean;
    check_param("target mean", mean, mean > 0.0, "target must have positive mean")?;
    let q0 = opts.q_hint.unwrap_or(var / (mean * mean)).max(1e-6);
    let s0 = opts.sigma_hint.unwrap_or(mean.sqrt());

    let objective = |x: [f64; 2]| -> f64 {
        let (q, s) = (x[0].exp(), x[1].exp());
        let p = MPParams { q, sigma: s };
        let (lo, hi) = p.edges();
        let s2 = s * s;
        curve
            .lambda
            .iter()
            .zip(&curve.rho)
            .zip(&weights)
            .map(|((&l, &r), &w)| {
                let m = if l > lo && l < hi {
                    ((hi - l) * (l - lo)).sqrt() / (2.0 * std::f64::consts::PI * q * s2 * l)
                } else {
                    0.0
                };
                (m - r) * (m - r) * w
            })
            .sum()
    };

    let start = [q0.ln(), s0.ln()];
    let mut best = nelder_mead(&objective, start, 0.1, opts.max_iter);
    let mut iterations = best.2;
    for r in 0..opts.restarts {
        let mut rng = stream_rng(opts.seed, r as u64 + 1);
        let x0 = [
            start[0] + rng.random_range(-0.2..0.2),
            start[1] + rng.random_range(-0.2..0.2),
        ];
        let run = nelder_mead(&objective, x0, 0.1, opts.max_iter);
        iterations += run.2;
        if run.1 < best.1 {
            best = (run.0, run.1, run.2, run.3 || best.3);
        } else {
            best.3 |= run.3 && (run.1 - best.1).abs() <= 1e-9 * best.1.max(1e-300);
        }
    }
    Ok(MpFit {
        params: MPParams::new(best.0[0].exp(), best.0[1].exp())?,
        residual: best.1,
        converged: best.3,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_parameters_from_exact_curve() {
        let truth = MPParams::new(0.3, 0.9).unwrap();
        let curve = truth.curve(2001).unwrap();
        let fit = mp_fit(FitTarget::Curve(&curve), &MpFitOptions::default()).unwrap();
        assert!((fit.params.q - 0.3).abs() < 1e-3, "{:?}", fit);
        assert!((fit.params.sigma - 0.9).abs() < 1e-3);
        assert!(fit.converged);
    }

    #[test]
    fn too_few_eigenvalues() {
        assert!(matches!(
            mp_fit(FitTarget::Sample(&[1.0; 5]), &MpFitOptions::default()),
            Err(Error::TooShort { .. })
        ));
    }
}
