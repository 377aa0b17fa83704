//! Sampled spectral densities, histograms and bulk detection.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};

/// A density sampled on an ascending grid.
///
/// Curves produced by [`histogram`] carry `bin_width` and `lambda` holds the
/// bin centres; moments are then bin sums. Solver curves have no bin width
/// and are integrated with the trapezoid rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub lambda: Vec<f64>,
    pub rho: Vec<f64>,
    pub mass: f64,
    /// Support intervals `(lo, hi)`, ascending.
    pub edges: Vec<(f64, f64)>,
    /// Isolated eigenvalues that were kept out of the density.
    pub isolated: Vec<f64>,
    pub bin_width: Option<f64>,
    /// Largest `|M_C(Z) - m|` seen while solving, if the curve came from the solver.
    pub max_residual: Option<f64>,
}

impl DensityCurve {
    /// A curve on an arbitrary grid, integrated by trapezoids.
    pub fn from_samples(lambda: Vec<f64>, rho: Vec<f64>, cutoff: f64) -> Result<Self> {
        if lambda.len() != rho.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len(),
                found: rho.len(),
            });
        }
        if lambda.len() < 2 {
            return Err(Error::TooShort {
                what: "density grid",
                len: lambda.len(),
                min: 2,
            });
        }
        let rho: Vec<f64> = rho.into_iter().map(|r| r.max(0.0)).collect();
        let mass = trapezoid(&lambda, &rho, |_| 1.0);
        let edges = detect_edges(&lambda, &rho, cutoff);
        Ok(Self {
            lambda,
            rho,
            mass,
            edges,
            isolated: vec![],
            bin_width: None,
            max_residual: None,
        })
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// `∫ λ^k ρ(λ) dλ`.
    pub fn moment(&self, k: i32) -> f64 {
        match self.bin_width {
            Some(w) => self
                .lambda
                .iter()
                .zip(&self.rho)
                .map(|(l, r)| l.powi(k) * r * w)
                .sum(),
            None => trapezoid(&self.lambda, &self.rho, |l| l.powi(k)),
        }
    }

    /// Density-weighted mean of λ restricted to `[lo, hi]`.
    pub fn mean_on(&self, lo: f64, hi: f64) -> Option<f64> {
        let (mut num, mut den) = (0.0, 0.0);
        match self.bin_width {
            Some(w) => {
                for (l, r) in self.lambda.iter().zip(&self.rho) {
                    if *l >= lo && *l <= hi {
                        num += l * r * w;
                        den += r * w;
                    }
                }
            }
            None => {
                for k in 1..self.lambda.len() {
                    let (a, b) = (self.lambda[k - 1], self.lambda[k]);
                    if a < lo || b > hi {
                        continue;
                    }
                    let h = 0.5 * (b - a);
                    num += h * (a * self.rho[k - 1] + b * self.rho[k]);
                    den += h * (self.rho[k - 1] + self.rho[k]);
                }
            }
        }
        (den > 0.0).then(|| num / den)
    }

    /// Linear interpolation of ρ, zero outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        let n = self.lambda.len();
        if n == 0 || x < self.lambda[0] || x > self.lambda[n - 1] {
            return 0.0;
        }
        let k = self.lambda.partition_point(|&l| l < x);
        if k == 0 {
            return self.rho[0];
        }
        let (a, b) = (self.lambda[k - 1], self.lambda[k]);
        let t = (x - a) / (b - a);
        self.rho[k - 1] * (1.0 - t) + self.rho[k] * t
    }
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64], weight: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for k in 1..x.len() {
        let h = x[k] - x[k - 1];
        acc += 0.5 * h * (weight(x[k - 1]) * y[k - 1] + weight(x[k]) * y[k]);
    }
    acc
}

/// Support intervals of a sampled density. An interval opens where ρ first
/// exceeds `cutoff` and closes once ρ falls below `cutoff / 2`.
pub fn detect_edges(lambda: &[f64], rho: &[f64], cutoff: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut open: Option<f64> = None;
    let mut last_above = 0.0;
    for (&l, &r) in lambda.iter().zip(rho) {
        match open {
            None if r > cutoff => {
                open = Some(l);
                last_above = l;
            }
            Some(start) => {
                if r >= 0.5 * cutoff {
                    last_above = l;
                } else {
                    out.push((start, last_above));
                    open = None;
                }
            }
            None => {}
        }
    }
    if let Some(start) = open {
        out.push((start, last_above));
    }
    out
}

/// Normalized histogram: `Σ density · width = 1` over the values that fall
/// inside `range`. Without a range, `[min, max]` of the data is used.
pub fn histogram(values: &[f64], bin_count: usize, range: Option<(f64, f64)>) -> Result<DensityCurve> {
    if values.is_empty() {
        return Err(Error::EmptyInput("histogram of no values"));
    }
    if let Some(p) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::NanInSample(p));
    }
    check_param("bin_count", bin_count as f64, bin_count >= 1, "need at least one bin")?;
    let (lo, hi) = match range {
        Some(r) => r,
        None => {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        }
    };
    check_param("range", hi - lo, hi > lo && (hi - lo).is_finite(), "range must be non-degenerate")?;
    let width = (hi - lo) / bin_count as f64;
    let mut counts = vec![0usize; bin_count];
    let mut inside = 0usize;
    for &v in values {
        if v < lo || v > hi {
            continue;
        }
        let k = (((v - lo) / width) as usize).min(bin_count - 1);
        counts[k] += 1;
        inside += 1;
    }
    if inside == 0 {
        return Err(Error::EmptyInput("no values inside histogram range"));
    }
    let norm = 1.0 / (inside as f64 * width);
    let lambda: Vec<f64> = (0..bin_count).map(|k| lo + (k as f64 + 0.5) * width).collect();
    let rho: Vec<f64> = counts.iter().map(|&c| c as f64 * norm).collect();
    let mass = rho.iter().sum::<f64>() * width;

    let mut edges = Vec::new();
    let mut k = 0;
    while k < bin_count {
        if counts[k] == 0 {
            k += 1;
            continue;
        }
        let start = k;
        while k < bin_count && counts[k] > 0 {
            k += 1;
        }
        edges.push((lo + start as f64 * width, lo + k as f64 * width));
    }
    Ok(DensityCurve {
        lambda,
        rho,
        mass,
        edges,
        isolated: vec![],
        bin_width: Some(width),
        max_residual: None,
    })
}

/// Eigenvalues grouped into bulks separated by gaps wider than `min_gap`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BulkSplit {
    /// Ascending groups with at least `min_count` members.
    pub bulks: Vec<Vec<f64>>,
    /// Members of groups smaller than `min_count`.
    pub isolated: Vec<f64>,
}

impl BulkSplit {
    pub fn means(&self) -> Vec<f64> {
        self.bulks
            .iter()
            .map(|b| b.iter().sum::<f64>() / b.len() as f64)
            .collect()
    }

    /// All bulk members in ascending order.
    pub fn bulk_values(&self) -> Vec<f64> {
        self.bulks.iter().flatten().copied().collect()
    }
}

pub fn split_bulks(values: &[f64], min_gap: f64, min_count: usize) -> BulkSplit {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for x in v {
        match groups.last_mut() {
            Some(g) if x - g[g.len() - 1] <= min_gap => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    let mut out = BulkSplit {
        bulks: vec![],
        isolated: vec![],
    };
    for g in groups {
        if g.len() >= min_count {
            out.bulks.push(g);
        } else {
            out.isolated.extend(g);
        }
    }
    out
}
