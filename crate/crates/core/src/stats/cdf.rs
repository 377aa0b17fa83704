use serde::{Deserialize, Serialize};

use crate::density::DensityCurve;
use crate::error::{Error, Result};

const MASS_TOL: f64 = 2e-3;

pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Piecewise-linear CDF: 0 left of the grid, 1 right of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfTable {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
}

impl CdfTable {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        if n == 0 || x < self.x[0] {
            return 0.0;
        }
        if x >= self.x[n - 1] {
            return 1.0;
        }
        let k = self.x.partition_point(|&v| v <= x);
        let (a, b) = (self.x[k - 1], self.x[k]);
        let t = (x - a) / (b - a);
        self.f[k - 1] + t * (self.f[k] - self.f[k - 1])
    }
}

impl Cdf for CdfTable {
    fn cdf(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// Cumulative trapezoid integral of the curve, rescaled to end at exactly 1.
/// Histogram curves are integrated bin by bin at the bin boundaries.
pub fn cdf_from_density(curve: &DensityCurve) -> Result<CdfTable> {
    let mass = curve.moment(0);
    if !((mass - 1.0).abs() <= MASS_TOL) {
        return Err(Error::DensityMass {
            mass,
            tolerance: MASS_TOL,
        });
    }
    let (x, mut f) = match curve.bin_width {
        Some(w) => {
            let mut x = Vec::with_capacity(curve.len() + 1);
            let mut f = Vec::with_capacity(curve.len() + 1);
            x.push(curve.lambda[0] - 0.5 * w);
            f.push(0.0);
            let mut acc = 0.0;
            for (l, r) in curve.lambda.iter().zip(&curve.rho) {
                acc += r * w;
                x.push(l + 0.5 * w);
                f.push(acc);
            }
            (x, f)
        }
        None => {
            let l = &curve.lambda;
            let mut f = vec![0.0; l.len()];
            for k in 1..l.len() {
                f[k] = f[k - 1] + 0.5 * (l[k] - l[k - 1]) * (curve.rho[k - 1] + curve.rho[k]);
            }
            (l.clone(), f)
        }
    };
    let total = *f.last().unwrap_or(&1.0);
    for v in f.iter_mut() {
        *v = (*v / total).min(1.0);
    }
    Ok(CdfTable { x, f })
}
