use serde::{Deserialize, Serialize};

use crate::density::DensityCurve;
use crate::error::{check_param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MPParams {
    pub q: f64,
    pub sigma: f64,
}

impl MPParams {
    pub fn new(q: f64, sigma: f64) -> Result<Self> {
        check_param("q", q, q > 0.0 && q.is_finite(), "must be positive")?;
        check_param("sigma", sigma, sigma > 0.0 && sigma.is_finite(), "must be positive")?;
        Ok(Self { q, sigma })
    }

    /// `(Λ₋, Λ₊) = σ²(1 ∓ √q)²`.
    pub fn edges(&self) -> (f64, f64) {
        let s2 = self.sigma * self.sigma;
        let r = self.q.sqrt();
        (s2 * (1.0 - r).powi(2), s2 * (1.0 + r).powi(2))
    }

    fn density_unchecked(&self, lambda: f64) -> f64 {
        let (lo, hi) = self.edges();
        if lambda <= lo || lambda >= hi {
            return 0.0;
        }
        let s2 = self.sigma * self.sigma;
        ((hi - lambda) * (lambda - lo)).sqrt() / (2.0 * std::f64::consts::PI * self.q * s2 * lambda)
    }

    /// The density on `points` nodes that cluster at both edges
    /// (`λ = mid − half·cos θ`, θ uniform), which resolves the square-root
    /// behaviour there. For `q > 1` the atom at zero is not represented.
    pub fn curve(&self, points: usize) -> Result<DensityCurve> {
        check_param("points", points as f64, points >= 3, "need at least 3 points")?;
        let (lo, hi) = self.edges();
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let lambda: Vec<f64> = (0..points)
            .map(|k| {
                let th = std::f64::consts::PI * k as f64 / (points - 1) as f64;
                mid - half * th.cos()
            })
            .collect();
        let rho = lambda.iter().map(|&l| self.density_unchecked(l)).collect();
        let mut c = DensityCurve::from_samples(lambda, rho, 1e-4)?;
        c.edges = vec![(lo, hi)];
        Ok(c)
    }
}

/// Marchenko-Pastur density; zero outside `[Λ₋, Λ₊]`.
pub fn mp_density(lambda: f64, p: &MPParams) -> Result<f64> {
    check_param("lambda", lambda, lambda > 0.0, "must be positive")?;
    Ok(p.density_unchecked(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_and_values() {
        let p = MPParams::new(0.25, 1.0).unwrap();
        assert_eq!(p.edges(), (0.25, 2.25));
        assert_eq!(mp_density(3.0, &p).unwrap(), 0.0);
        let want = 2.0 / std::f64::consts::PI * 0.9375f64.sqrt() / 1.0;
        assert!((mp_density(1.0, &p).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.616_404).abs() < 1e-6);
        assert!(mp_density(0.0, &p).is_err());
        assert!(MPParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn curve_has_unit_mass_and_mean_sigma_squared() {
        for (q, s) in [(0.25, 1.0), (0.5, 0.8), (0.05, 1.3)] {
            let c = MPParams::new(q, s).unwrap().curve(4001).unwrap();
            assert!((c.mass - 1.0).abs() < 1e-5, "mass {}", c.mass);
            assert!((c.moment(1) - s * s).abs() < 1e-5);
        }
    }
}
