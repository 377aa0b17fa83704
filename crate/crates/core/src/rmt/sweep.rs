use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solver::solve_mc_detailed;
use super::spectrum::DegenerateSpectrum;
use crate::density::DensityCurve;
use crate::error::{check_param, Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_ANCHOR: f64 = 1e3;
pub const EDGE_CUTOFF: f64 = 1e-4;
const CHUNK: usize = 256;
const DESCENT_RATIO: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Imaginary offset of the evaluation line `λ + iε`.
    pub epsilon: f64,
    /// Strictly increasing, positive.
    pub grid: Vec<f64>,
    /// Height at which each sweep segment starts its descent to the real axis;
    /// there the root is identified by its `1/z` asymptote.
    pub branch_seed_z: f64,
}

impl SolverConfig {
    pub fn new(grid: Vec<f64>) -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            grid,
            branch_seed_z: DEFAULT_ANCHOR,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Uniform grid covering the support for `spec` at ratio `q`.
    pub fn auto(spec: &DegenerateSpectrum, q: f64, points: usize) -> Result<Self> {
        Ok(Self::new(auto_grid(spec, q, points)?))
    }

    pub fn validate(&self) -> Result<()> {
        check_param("epsilon", self.epsilon, self.epsilon > 0.0 && self.epsilon.is_finite(), "must be positive")?;
        check_param(
            "branch_seed_z",
            self.branch_seed_z,
            self.branch_seed_z > self.epsilon && self.branch_seed_z.is_finite(),
            "must exceed epsilon",
        )?;
        if self.grid.len() < 2 {
            return Err(Error::TooShort {
                what: "solver grid",
                len: self.grid.len(),
                min: 2,
            });
        }
        check_param("grid start", self.grid[0], self.grid[0] > 0.0, "grid values must be positive")?;
        if let Some(w) = self.grid.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "grid",
                value: w[1],
                reason: "grid must be strictly increasing",
            });
        }
        Ok(())
    }
}

/// `points` uniform nodes on `[0.9 Λ_min (1 − √q)², 1.1 Λ_max (1 + √q)²]`,
/// which contains the support of the dressed density.
pub fn auto_grid(spec: &DegenerateSpectrum, q: f64, points: usize) -> Result<Vec<f64>> {
    check_param("q", q, q > 0.0 && q.is_finite(), "must be positive")?;
    check_param("points", points as f64, points >= 2, "need at least 2 points")?;
    let r = q.sqrt();
    let hi = 1.1 * spec.max_value() * (1.0 + r).powi(2);
    let lo = (0.9 * spec.min_value() * (1.0 - r).powi(2)).max(1e-4 * hi);
    let h = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|k| lo + k as f64 * h).collect())
}

struct Point {
    m: Complex64,
    residual: f64,
}

/// Descends from `x + i·top` to `x + i·bottom` along a geometric sequence of
/// heights, following the root continuously.
fn descend(spec: &DegenerateSpectrum, q: f64, x: f64, top: f64, bottom: f64) -> Result<Point> {
    let mut y = top;
    let mut prev = None;
    loop {
        let s = solve_mc_detailed(spec, q, Complex64::new(x, y), prev)?;
        if y <= bottom {
            return Ok(Point {
                m: s.m,
                residual: s.residual,
            });
        }
        prev = Some(s.m);
        y = (y * DESCENT_RATIO).max(bottom);
    }
}

fn sweep_chunk(spec: &DegenerateSpectrum, q: f64, cfg: &SolverConfig, xs: &[f64]) -> Result<Vec<Point>> {
    let mut out = Vec::with_capacity(xs.len());
    let first = descend(spec, q, xs[0], cfg.branch_seed_z, cfg.epsilon)?;
    let mut prev = first.m;
    out.push(first);
    for &x in &xs[1..] {
        let s = solve_mc_detailed(spec, q, Complex64::new(x, cfg.epsilon), Some(prev))?;
        prev = s.m;
        out.push(Point {
            m: s.m,
            residual: s.residual,
        });
    }
    Ok(out)
}

/// Density of the sample correlation matrix whose true spectrum is `spec`,
/// `ρ(λ) = −Im m_c(λ + iε) / (πλ)` clipped at zero.
///
/// The grid is cut into fixed segments of 256 points. Each segment starts
/// with a descent from the anchor height and is then swept left to right,
/// every point seeded with its predecessor. Segments run in parallel; the
/// result does not depend on the number of threads.
pub fn density_from_spectrum(spec: &DegenerateSpectrum, q: f64, cfg: &SolverConfig) -> Result<DensityCurve> {
    check_param("q", q, q > 0.0 && q.is_finite(), "must be positive")?;
    cfg.validate()?;
    let chunks: Vec<Vec<Point>> = cfg
        .grid
        .par_chunks(CHUNK)
        .map(|xs| sweep_chunk(spec, q, cfg, xs))
        .collect::<Result<_>>()?;
    let points: Vec<Point> = chunks.into_iter().flatten().collect();
    let rho: Vec<f64> = points
        .iter()
        .zip(&cfg.grid)
        .map(|(p, &x)| (-p.m.im / (std::f64::consts::PI * x)).max(0.0))
        .collect();
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    let mut curve = DensityCurve::from_samples(cfg.grid.clone(), rho, EDGE_CUTOFF)?;
    curve.max_residual = Some(max_residual);
    Ok(curve)
}

/// `m_c(λ + iε)` at every grid node.
pub fn mc_along_grid(spec: &DegenerateSpectrum, q: f64, cfg: &SolverConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let chunks: Vec<Vec<Point>> = cfg
        .grid
        .par_chunks(CHUNK)
        .map(|xs| sweep_chunk(spec, q, cfg, xs))
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().map(|p| p.m).collect())
}
