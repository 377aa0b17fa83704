use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::factor::AnalyticSpectrum;

const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Eigenvalue Λ > 0.
    pub value: f64,
    /// Weight w = n / N in `(0, 1]`.
    pub weight: f64,
}

/// A true spectrum made of `L` distinct eigenvalues with weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateSpectrum {
    atoms: Vec<Atom>,
}

impl DegenerateSpectrum {
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput("spectrum has no eigenvalues"));
        }
        for &(v, w) in pairs {
            check_param("eigenvalue", v, v > 0.0 && v.is_finite(), "must be positive")?;
            check_param("weight", w, w > 0.0 && w <= 1.0, "must lie in (0, 1]")?;
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        check_param("sum of weights", total, (total - 1.0).abs() <= WEIGHT_TOL, "must equal 1")?;
        let mut atoms: Vec<Atom> = pairs.iter().map(|&(value, weight)| Atom { value, weight }).collect();
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        if let Some(w) = atoms.windows(2).find(|w| w[0].value == w[1].value) {
            return Err(Error::InvalidParameter {
                name: "eigenvalue",
                value: w[0].value,
                reason: "eigenvalues must be distinct",
            });
        }
        Ok(Self { atoms })
    }

    /// Like [`new`](Self::new) but rescales positive weights to sum to one.
    pub fn normalized(pairs: &[(f64, f64)]) -> Result<Self> {
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        check_param("sum of weights", total, total > 0.0 && total.is_finite(), "must be positive")?;
        let scaled: Vec<(f64, f64)> = pairs.iter().map(|&(v, w)| (v, w / total)).collect();
        Self::new(&scaled)
    }

    /// Keeps eigenvalues with multiplicity at least `min_multiplicity` and
    /// positive value; the dropped weight is redistributed by renormalizing.
    pub fn from_analytic(spec: &AnalyticSpectrum, min_multiplicity: usize) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = spec
            .entries
            .iter()
            .filter(|e| e.multiplicity >= min_multiplicity && e.value > 0.0)
            .map(|e| (e.value, e.multiplicity as f64))
            .collect();
        if pairs.is_empty() {
            return Err(Error::EmptyInput("no eigenvalue survives the multiplicity filter"));
        }
        Self::normalized(&pairs)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ w_i Λ_i^k`.
    pub fn moment(&self, k: i32) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.value.powi(k)).sum()
    }

    pub fn min_value(&self) -> f64 {
        self.atoms[0].value
    }

    pub fn max_value(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].value
    }
}

/// `M_C(Z) = Σ w_i Λ_i / (Z − Λ_i)`.
pub fn moment_gen_c(spec: &DegenerateSpectrum, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for a in spec.atoms() {
        let d = z - a.value;
        if d.norm() == 0.0 {
            return Err(Error::Singularity { at: z });
        }
        acc += a.weight * a.value / d;
    }
    Ok(acc)
}

/// `G = (M + 1) / Z`.
pub fn green_from_mgf(m: Complex64, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Singularity { at: z });
    }
    Ok((m + 1.0) / z)
}

/// `Z = z / (1 + q m)`.
pub fn conformal_map(z: Complex64, m: Complex64, q: f64) -> Result<Complex64> {
    let u = 1.0 + q * m;
    if u.norm() == 0.0 {
        return Err(Error::Singularity { at: z });
    }
    Ok(z / u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation() {
        assert!(DegenerateSpectrum::new(&[(1.0, 1.0)]).is_ok());
        assert!(DegenerateSpectrum::new(&[(1.0, 0.5)]).is_err());
        assert!(DegenerateSpectrum::new(&[(0.0, 1.0)]).is_err());
        assert!(DegenerateSpectrum::new(&[(1.0, 0.5), (1.0, 0.5)]).is_err());
        let s = DegenerateSpectrum::normalized(&[(2.0, 3.0), (1.0, 1.0)]).unwrap();
        assert_eq!(s.atoms()[0], Atom { value: 1.0, weight: 0.25 });
    }

    #[test]
    fn mgf_values() {
        let one = DegenerateSpectrum::new(&[(1.0, 1.0)]).unwrap();
        assert_eq!(moment_gen_c(&one, c(2.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(matches!(moment_gen_c(&one, c(1.0, 0.0)), Err(Error::Singularity { .. })));

        let two = DegenerateSpectrum::new(&[(0.16, 99.0 / 499.0), (1.0, 400.0 / 499.0)]).unwrap();
        // 0.16 * 99/499 / 1.84 + 400/499 = (99*0.16/1.84 + 400) / 499
        let want = (99.0 * 0.16 / 1.84 + 400.0) / 499.0;
        let got = moment_gen_c(&two, c(2.0, 0.0)).unwrap();
        assert!((got.re - want).abs() < 1e-15 && got.im == 0.0);

        let z = c(1e6, 0.0);
        let m = moment_gen_c(&two, z).unwrap();
        assert!(((m * z).re - two.moment(1)).abs() / two.moment(1) < 1e-5);
    }

    #[test]
    fn green_and_map() {
        assert_eq!(green_from_mgf(c(0.0, 0.0), c(2.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(green_from_mgf(c(1.0, 0.0), c(2.0, 0.0)).unwrap(), c(1.0, 0.0));
        let (m, z) = (c(0.3, -0.7), c(1.1, 0.2));
        let g = green_from_mgf(m, z).unwrap();
        assert!((z * g - 1.0 - m).norm() < 1e-15);
        assert!(green_from_mgf(m, c(0.0, 0.0)).is_err());

        assert_eq!(conformal_map(z, m, 0.0).unwrap(), z);
        assert_eq!(conformal_map(z, c(0.0, 0.0), 0.5).unwrap(), z);
        assert!(conformal_map(z, c(-2.0, 0.0), 0.5).is_err());
    }
}
